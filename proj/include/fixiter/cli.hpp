#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fixiter/convergence.hpp"
#include "fixiter/dde.hpp"
#include "fixiter/schemes.hpp"

namespace fixiter::cli {

/// Map description from a config file: either a builtin family
/// (currently "sahu": T x = (a x + c)^(1/3)) or an arithmetic expression
/// in x, optionally annotated with a contraction factor and fixed point.
struct MapSpec {
    std::string builtin;  // empty when expression-defined
    double a = 3.0, c = 18.0;
    std::string expr;  // empty when builtin
    std::optional<double> delta;
    std::optional<double> fixed_point;
};

struct OutputSpec {
    std::string path;
    std::string format = "csv";  // csv | json
};

struct ExperimentConfig {
    MapSpec map;
    double x0 = 0.0;
    double eta0 = 0.5, eta1 = 0.5, eta2 = 0.5;
    std::vector<SchemeId> schemes;
    StopRule stop;
    std::optional<OutputSpec> output;
};

/// Parses the JSON config document; applies the FIXITER_MAX_ITERS
/// environment override to the stop rule.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

/// Double-precision realization of the map (compare/datadep commands).
ContractionMap<double> make_map(const MapSpec& spec);
/// 10-digit decimal realization (table reproduction).
ContractionMap<Decimal> make_map_decimal(const MapSpec& spec);

/// The map's fixed point: declared, known for the builtin, or estimated
/// by a deep Picard run started near x0_hint.
double resolve_fixed_point(const MapSpec& spec, double x0_hint);

/// One row per iteration index, one column per scheme, 9-decimal strings.
struct TableResult {
    std::vector<std::string> header;               // "n", then scheme names
    std::vector<std::vector<std::string>> rows;    // rows[i][0] is the index
};

/// Runs every configured scheme (concurrently) in decimal arithmetic until
/// all print the fixed point to 9 decimals or the iteration cap is hit.
TableResult build_table(const ExperimentConfig& config);

std::string render_table_csv(const TableResult& table);
std::string render_table_json(const TableResult& table);

// Exit codes: 0 success, 2 configuration or hypothesis error,
// 3 numerical failure, 4 DDE condition failure.
int cmd_table(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_compare(const ExperimentConfig& config, SchemeId scheme_a, SchemeId scheme_b,
                std::ostream& out, std::ostream& err);
int cmd_datadep(const ExperimentConfig& config, double epsilon, double perturbation,
                std::ostream& out, std::ostream& err);

/// Parses a DDE problem file: t0, b, tau, lipschitz, rhs (expression in
/// t, u, v), history (expression in t), optional controls.
struct DDEConfig {
    DDEProblem problem;
    double eta0 = 0.5, eta1 = 0.5, eta2 = 0.5;
};
DDEConfig load_dde_config(const std::string& path);

int cmd_dde(const std::string& problem_path, double step, double tol,
            const std::string& csv_path, std::ostream& out, std::ostream& err);

} // namespace fixiter::cli
