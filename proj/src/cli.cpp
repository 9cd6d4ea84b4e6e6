#include "fixiter/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "fixiter/datadep.hpp"
#include "fixiter/errors.hpp"
#include "fixiter/expr.hpp"

namespace fixiter::cli {

namespace {

using nlohmann::json;

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error(path + ": " + e.what());
    }
}

json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config: ") + e.what());
    }
}

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_number())
        throw config_error("config: missing or non-numeric field '" + key + "'");
    return j[key].get<double>();
}

void apply_env_max_iters(StopRule& stop) {
    const char* env = std::getenv("FIXITER_MAX_ITERS");
    if (!env || !*env) return;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1)
        throw config_error("FIXITER_MAX_ITERS must be a positive integer");
    stop.max_iters = static_cast<std::size_t>(v);
}

MapSpec parse_map_spec(const json& j) {
    if (!j.is_object()) throw config_error("config: 'map' must be an object");
    MapSpec spec;
    if (j.contains("builtin")) {
        spec.builtin = j["builtin"].get<std::string>();
        if (spec.builtin != "sahu")
            throw config_error("config: unknown builtin map '" + spec.builtin + "'");
        if (j.contains("a")) spec.a = require_number(j, "a");
        if (j.contains("c")) spec.c = require_number(j, "c");
        if (!(spec.a > 0.0) || !(spec.c > 0.0))
            throw config_error("config: sahu map needs a > 0 and c > 0");
    } else if (j.contains("expr")) {
        spec.expr = j["expr"].get<std::string>();
    } else {
        throw config_error("config: 'map' needs either 'builtin' or 'expr'");
    }
    if (j.contains("delta")) {
        spec.delta = require_number(j, "delta");
        if (!(*spec.delta > 0.0 && *spec.delta < 1.0))
            throw config_error("config: map delta must lie in (0,1)");
    }
    if (j.contains("fixed_point")) spec.fixed_point = require_number(j, "fixed_point");
    return spec;
}

ExperimentConfig parse_config_json(const json& j) {
    ExperimentConfig cfg;
    if (!j.is_object()) throw config_error("config: document must be an object");
    if (!j.contains("map")) throw config_error("config: missing 'map'");
    cfg.map = parse_map_spec(j["map"]);
    cfg.x0 = require_number(j, "x0");

    if (j.contains("controls")) {
        const json& c = j["controls"];
        if (c.contains("eta0")) cfg.eta0 = require_number(c, "eta0");
        if (c.contains("eta1")) cfg.eta1 = require_number(c, "eta1");
        if (c.contains("eta2")) cfg.eta2 = require_number(c, "eta2");
        for (double e : {cfg.eta0, cfg.eta1, cfg.eta2})
            if (!(e >= 0.0 && e <= 1.0))
                throw config_error("config: control weights must lie in [0,1]");
    }

    if (!j.contains("schemes") || !j["schemes"].is_array() || j["schemes"].empty())
        throw config_error("config: 'schemes' must be a non-empty array");
    for (const auto& s : j["schemes"]) {
        auto id = parse_scheme(s.get<std::string>());
        if (!id) throw config_error("config: unknown scheme '" + s.get<std::string>() + "'");
        cfg.schemes.push_back(*id);
    }

    if (j.contains("stop")) {
        const json& s = j["stop"];
        if (s.contains("max_iters")) {
            double m = require_number(s, "max_iters");
            if (m < 1) throw config_error("config: stop.max_iters must be >= 1");
            cfg.stop.max_iters = static_cast<std::size_t>(m);
        }
        if (s.contains("abs_tol")) cfg.stop.abs_tol = require_number(s, "abs_tol");
        if (s.contains("target_tol")) cfg.stop.target_tol = require_number(s, "target_tol");
        cfg.stop.validate();
    }

    if (j.contains("output")) {
        const json& o = j["output"];
        OutputSpec spec;
        if (!o.contains("path")) throw config_error("config: output needs a 'path'");
        spec.path = o["path"].get<std::string>();
        if (o.contains("format")) spec.format = o["format"].get<std::string>();
        if (spec.format != "csv" && spec.format != "json")
            throw config_error("config: output format must be csv or json");
        cfg.output = std::move(spec);
    }
    return cfg;
}

// Exit-code contract shared by all commands.
template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const numerical_error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

void emit(const std::string& text, const std::optional<OutputSpec>& output, std::ostream& out) {
    if (output && !output->path.empty()) {
        std::ofstream file(output->path, std::ios::binary | std::ios::trunc);
        if (!file) throw config_error("cannot write file: " + output->path);
        file << text;
    } else {
        out << text;
    }
}

double json_safe(double v) { return std::isfinite(v) ? v : 0.0; }

} // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    ExperimentConfig cfg = parse_config_json(parse_json_text(json_text));
    apply_env_max_iters(cfg.stop);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    ExperimentConfig cfg = parse_config_json(load_json_file(path));
    apply_env_max_iters(cfg.stop);
    return cfg;
}

ContractionMap<double> make_map(const MapSpec& spec) {
    if (!spec.builtin.empty()) {
        const double a = spec.a, c = spec.c;
        double delta = spec.delta ? *spec.delta
                       : (a == 3.0 && c == 18.0) ? std::pow(18.0, -1.0 / 3.0)
                                                 : a / (3.0 * std::pow(c, 2.0 / 3.0));
        ContractionMap<double> map{
            [a, c](const double& x) { return std::cbrt(a * x + c); }, delta, {}};
        if (spec.fixed_point) map.fixed_point_hint = *spec.fixed_point;
        else if (a == 3.0 && c == 18.0) map.fixed_point_hint = 3.0;
        return map;
    }
    const std::string vars[] = {std::string("x")};
    Expression e = Expression::parse(spec.expr, vars);
    if (!spec.delta)
        throw config_error("config: expression maps need an explicit 'delta'");
    ContractionMap<double> map{
        [e](const double& x) {
            double v[] = {x};
            return e.evaluate(v);
        },
        *spec.delta,
        {}};
    if (spec.fixed_point) map.fixed_point_hint = *spec.fixed_point;
    return map;
}

ContractionMap<Decimal> make_map_decimal(const MapSpec& spec) {
    ContractionMap<double> base = make_map(spec);
    ContractionMap<Decimal> map;
    map.delta = base.delta;
    if (base.fixed_point_hint) map.fixed_point_hint = Decimal::from_double(*base.fixed_point_hint);
    if (!spec.builtin.empty()) {
        Decimal a = Decimal::from_double(spec.a), c = Decimal::from_double(spec.c);
        map.apply = [a, c](const Decimal& x) { return cbrt(a * x + c); };
    } else {
        // Expression maps evaluate in binary and round the result back.
        map.apply = [base](const Decimal& x) {
            return Decimal::from_double(base.apply(x.to_double()));
        };
    }
    return map;
}

double resolve_fixed_point(const MapSpec& spec, double x0_hint) {
    if (spec.fixed_point) return *spec.fixed_point;
    ContractionMap<double> map = make_map(spec);
    if (map.fixed_point_hint) return *map.fixed_point_hint;
    double x = x0_hint;
    for (int k = 0; k < 100000; ++k) {
        double next = map.apply(x);
        if (!std::isfinite(next))
            throw numerical_error("resolve_fixed_point: iteration left the domain",
                                  static_cast<std::size_t>(k));
        if (std::abs(next - x) <= 1e-15 * (std::abs(next) + 1.0)) return next;
        x = next;
    }
    throw numerical_error("resolve_fixed_point: no convergence", 100000);
}

TableResult build_table(const ExperimentConfig& config) {
    config.stop.validate();
    ContractionMap<Decimal> map = make_map_decimal(config.map);
    ControlSequences controls =
        ControlSequences::constant(config.eta0, config.eta1, config.eta2);
    const Decimal x0 = Decimal::from_double(config.x0);
    const std::string target =
        Decimal::from_double(resolve_fixed_point(config.map, config.x0)).to_fixed(9);
    const std::size_t cap = config.stop.max_iters;

    struct Column {
        std::vector<std::string> cells;
        IterationState<Decimal> state;
    };
    auto run_column = [&](SchemeId id) {
        Column col{{}, IterationState<Decimal>{0, x0, {}}};
        while (col.state.n < cap) {
            col.state = scheme_step(id, col.state, map, controls);
            col.cells.push_back(col.state.x.to_fixed(9));
            if (col.cells.back() == target) break;
        }
        return col;
    };

    std::vector<std::future<Column>> futures;
    futures.reserve(config.schemes.size());
    for (SchemeId id : config.schemes)
        futures.push_back(std::async(std::launch::async, run_column, id));
    std::vector<Column> columns;
    columns.reserve(futures.size());
    for (auto& f : futures) columns.push_back(f.get());

    std::size_t rows = 0;
    for (const auto& col : columns) rows = std::max(rows, col.cells.size());
    // Slower schemes dictate the row count; extend the finished ones.
    for (std::size_t i = 0; i < columns.size(); ++i) {
        Column& col = columns[i];
        while (col.cells.size() < rows && col.state.n < cap) {
            col.state = scheme_step(config.schemes[i], col.state, map, controls);
            col.cells.push_back(col.state.x.to_fixed(9));
        }
        while (col.cells.size() < rows) col.cells.push_back(col.cells.back());
    }

    TableResult table;
    table.header.push_back("n");
    for (SchemeId id : config.schemes) table.header.emplace_back(scheme_name(id));
    for (std::size_t r = 0; r < rows; ++r) {
        std::vector<std::string> row;
        row.push_back(std::to_string(r + 1));
        for (const auto& col : columns) row.push_back(col.cells[r]);
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string render_table_csv(const TableResult& table) {
    std::ostringstream os;
    for (std::size_t i = 0; i < table.header.size(); ++i)
        os << (i ? "," : "") << table.header[i];
    os << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    return os.str();
}

std::string render_table_json(const TableResult& table) {
    json j;
    j["header"] = table.header;
    j["rows"] = table.rows;
    return j.dump(2) + "\n";
}

int cmd_table(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        TableResult table = build_table(config);
        const bool as_json = config.output && config.output->format == "json";
        emit(as_json ? render_table_json(table) : render_table_csv(table), config.output, out);
        return 0;
    });
}

int cmd_compare(const ExperimentConfig& config, SchemeId scheme_a, SchemeId scheme_b,
                std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        ContractionMap<double> map = make_map(config.map);
        const double fp = resolve_fixed_point(config.map, config.x0);
        map.fixed_point_hint = fp;
        ControlSequences controls =
            ControlSequences::constant(config.eta0, config.eta1, config.eta2);

        Trajectory<double> ta = iterate(scheme_a, map, config.x0, controls, config.stop);
        Trajectory<double> tb = iterate(scheme_b, map, config.x0, controls, config.stop);
        std::size_t window =
            std::min<std::size_t>(8, std::min(ta.iterates.size(), tb.iterates.size()));
        RateVerdict verdict = compare_rates(ta, tb, fp, window);

        json j;
        j["scheme_a"] = scheme_name(scheme_a);
        j["scheme_b"] = scheme_name(scheme_b);
        j["fixed_point"] = fp;
        j["iterations_a"] = ta.final_index();
        j["iterations_b"] = tb.final_index();
        j["final_error_a"] = ta.errors.back();
        j["final_error_b"] = tb.errors.back();
        j["tail_window"] = verdict.tail_window;
        j["tail_ratios"] = verdict.tail_ratios;
        if (std::isfinite(verdict.limit_estimate)) j["limit_estimate"] = verdict.limit_estimate;
        else j["limit_estimate"] = "infinity";
        j["classification"] = rate_class_name(verdict.classification);
        out << j.dump(2) << "\n";
        return 0;
    });
}

int cmd_datadep(const ExperimentConfig& config, double epsilon, double perturbation,
                std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!(epsilon > 0.0)) throw config_error("datadep: epsilon must be positive");
        if (std::abs(perturbation) > epsilon)
            throw config_error("datadep: |perturbation| must not exceed epsilon");
        if (config.eta1 * config.eta2 < 0.5)
            throw hypothesis_violation("datadep: hypothesis eta1*eta2 >= 1/2 violated");

        ContractionMap<double> base = make_map(config.map);
        const double fp = resolve_fixed_point(config.map, config.x0);
        std::vector<double> probes{config.x0, fp, 0.5 * (config.x0 + fp)};
        auto op = make_approximate_operator<double>(
            base, [base, perturbation](const double& x) { return base.apply(x) + perturbation; },
            epsilon, probes);

        ControlSequences controls =
            ControlSequences::constant(config.eta0, config.eta1, config.eta2);
        DataDependenceReport<double> report =
            verify_data_dependence(op, config.x0, controls, config.stop);

        json j;
        j["epsilon"] = epsilon;
        j["perturbation"] = perturbation;
        j["delta"] = base.delta;
        j["bound"] = report.bound;
        j["empirical_gap"] = json_safe(report.empirical_gap);
        j["satisfied"] = report.satisfied;
        j["fixed_point"] = report.fixed_point;
        j["perturbed_fixed_point"] = report.perturbed_fixed_point;
        out << j.dump(2) << "\n";
        return 0;
    });
}

DDEConfig load_dde_config(const std::string& path) {
    json j = load_json_file(path);
    DDEConfig cfg;
    cfg.problem.t0 = require_number(j, "t0");
    cfg.problem.b = require_number(j, "b");
    cfg.problem.tau = require_number(j, "tau");
    cfg.problem.lipschitz = require_number(j, "lipschitz");
    if (!j.contains("rhs") || !j["rhs"].is_string())
        throw config_error("problem: missing 'rhs' expression");
    if (!j.contains("history") || !j["history"].is_string())
        throw config_error("problem: missing 'history' expression");

    const std::string rhs_vars[] = {std::string("t"), std::string("u"), std::string("v")};
    const std::string hist_vars[] = {std::string("t")};
    Expression rhs = Expression::parse(j["rhs"].get<std::string>(), rhs_vars);
    Expression hist = Expression::parse(j["history"].get<std::string>(), hist_vars);
    cfg.problem.rhs = [rhs](double t, double u, double v) {
        double vals[] = {t, u, v};
        return rhs.evaluate(vals);
    };
    cfg.problem.history = [hist](double t) {
        double vals[] = {t};
        return hist.evaluate(vals);
    };

    if (j.contains("controls")) {
        const json& c = j["controls"];
        if (c.contains("eta0")) cfg.eta0 = require_number(c, "eta0");
        if (c.contains("eta1")) cfg.eta1 = require_number(c, "eta1");
        if (c.contains("eta2")) cfg.eta2 = require_number(c, "eta2");
    }
    return cfg;
}

int cmd_dde(const std::string& problem_path, double step, double tol,
            const std::string& csv_path, std::ostream& out, std::ostream& err) {
    try {
        DDEConfig cfg = load_dde_config(problem_path);
        ConditionReport conditions = check_conditions(cfg.problem);
        if (!conditions.all_passed()) {
            err << "conditions failed: " << conditions.failed_names() << "\n";
            for (const auto& c : conditions.checks)
                if (!c.passed) err << "  " << c.name << ": " << c.witness << "\n";
            return 4;
        }

        StopRule stop;
        stop.abs_tol = tol;
        apply_env_max_iters(stop);
        ControlSequences controls = ControlSequences::constant(cfg.eta0, cfg.eta1, cfg.eta2);
        DDESolveResult result = solve_picard_s(cfg.problem, step, controls, stop);

        std::ofstream file(csv_path, std::ios::binary | std::ios::trunc);
        if (!file) throw config_error("cannot write file: " + csv_path);
        write_csv(result.solution, file);

        json j;
        j["iterations"] = result.iterations;
        j["residual"] = result.residual;
        j["nodes"] = result.solution.node_count();
        j["x_end"] = result.solution.values()[result.solution.node_count() - 1];
        j["output"] = csv_path;
        out << j.dump(2) << "\n";
        return 0;
    } catch (const numerical_error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace fixiter::cli
