#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fixiter/cli.hpp"

namespace cli = fixiter::cli;

int main(int argc, char** argv) {
    CLI::App app{"fixed-point iteration toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path, format, scheme_a, scheme_b;
    std::string problem_path, dde_out = "solution.csv";
    double step = 0.0, tol = 1e-12, epsilon = 0.0, perturb = 0.0;

    CLI::App* table = app.add_subcommand("table", "iterate schemes and tabulate them");
    table->add_option("--config", config_path, "experiment config (JSON)")->required();
    table->add_option("--out", out_path, "output file (default: stdout)");
    table->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App* compare = app.add_subcommand("compare", "compare convergence rates of two schemes");
    compare->add_option("--config", config_path, "experiment config (JSON)")->required();
    compare->add_option("--a", scheme_a, "first scheme")->required();
    compare->add_option("--b", scheme_b, "second scheme")->required();

    CLI::App* dde = app.add_subcommand("dde", "solve a delay differential equation");
    dde->add_option("--problem", problem_path, "problem description (JSON)")->required();
    dde->add_option("--step", step, "grid step; must divide tau and b - t0")->required();
    dde->add_option("--tol", tol, "sup-norm stopping tolerance")->required();
    dde->add_option("--out", dde_out, "solution CSV path (default: solution.csv)");

    CLI::App* datadep = app.add_subcommand("datadep", "verify the fixed-point drift bound");
    datadep->add_option("--config", config_path, "experiment config (JSON)")->required();
    datadep->add_option("--epsilon", epsilon, "operator perturbation budget")->required();
    datadep->add_option("--perturb", perturb, "constant shift applied to the map")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (table->parsed()) {
            cli::ExperimentConfig config = cli::load_config(config_path);
            if (!out_path.empty() || !format.empty()) {
                cli::OutputSpec output;
                if (config.output) output = *config.output;
                if (!out_path.empty()) output.path = out_path;
                if (!format.empty()) output.format = format;
                config.output = output;
            }
            return cli::cmd_table(config, std::cout, std::cerr);
        }
        if (compare->parsed()) {
            cli::ExperimentConfig config = cli::load_config(config_path);
            auto a = fixiter::parse_scheme(scheme_a);
            auto b = fixiter::parse_scheme(scheme_b);
            if (!a || !b) {
                std::cerr << "error: unknown scheme name\n";
                return 2;
            }
            return cli::cmd_compare(config, *a, *b, std::cout, std::cerr);
        }
        if (dde->parsed())
            return cli::cmd_dde(problem_path, step, tol, dde_out, std::cout, std::cerr);
        if (datadep->parsed()) {
            cli::ExperimentConfig config = cli::load_config(config_path);
            return cli::cmd_datadep(config, epsilon, perturb, std::cout, std::cerr);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
