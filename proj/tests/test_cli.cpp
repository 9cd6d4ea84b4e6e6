#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fixiter/cli.hpp"
#include "fixiter/errors.hpp"

namespace fs = std::filesystem;
using namespace fixiter;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path write_temp(const std::string& name, const std::string& content) {
    fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << content;
    return p;
}

int run(const std::string& args) {
    std::string cmd = std::string(FIXITER_BIN) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

const char* kSahuTableConfig = R"({
  "map": {"builtin": "sahu"},
  "x0": 1000,
  "controls": {"eta0": 0.5, "eta1": 0.5, "eta2": 0.5},
  "schemes": [%SCHEMES%],
  "stop": {"max_iters": 200}
})";

std::string table_config(const std::string& schemes) {
    std::string text = kSahuTableConfig;
    text.replace(text.find("%SCHEMES%"), 9, schemes);
    return text;
}

} // namespace

TEST_CASE("config parsing accepts the documented shape") {
    auto cfg = cli::parse_config(table_config("\"PicardS\", \"S\""));
    CHECK(cfg.x0 == 1000.0);
    CHECK(cfg.eta1 == 0.5);
    CHECK(cfg.schemes == std::vector<SchemeId>{SchemeId::PicardS, SchemeId::S});
    CHECK(cfg.stop.max_iters == 200);
    CHECK(!cfg.output);
}

TEST_CASE("config parsing rejects malformed documents") {
    CHECK_THROWS_AS((void)cli::parse_config("{"), config_error);
    CHECK_THROWS_AS((void)cli::parse_config(R"({"x0": 1})"), config_error);
    CHECK_THROWS_AS((void)cli::parse_config(
                        R"({"map": {"builtin": "sahu"}, "x0": 1, "schemes": []})"),
                    config_error);
    CHECK_THROWS_AS((void)cli::parse_config(
                        R"({"map": {"builtin": "sahu"}, "x0": 1, "schemes": ["Halpern"]})"),
                    config_error);
    CHECK_THROWS_AS((void)cli::parse_config(
                        R"({"map": {"builtin": "newton"}, "x0": 1, "schemes": ["S"]})"),
                    config_error);
    CHECK_THROWS_AS(
        (void)cli::parse_config(
            R"({"map": {"expr": "x/2"}, "x0": 1, "schemes": ["S"],
                "controls": {"eta1": 2.0}})"),
        config_error);
}

TEST_CASE("expression maps require a declared contraction factor") {
    cli::MapSpec spec;
    spec.expr = "x/2 + 1";
    CHECK_THROWS_AS((void)cli::make_map(spec), config_error);
    spec.delta = 0.5;
    auto map = cli::make_map(spec);
    CHECK(map.apply(4.0) == 3.0);
    CHECK(cli::resolve_fixed_point(spec, 0.0) == doctest::Approx(2.0));
}

TEST_CASE("builtin map resolves its known fixed point") {
    cli::MapSpec spec;
    spec.builtin = "sahu";
    CHECK(cli::resolve_fixed_point(spec, 1000.0) == 3.0);
    auto dec = cli::make_map_decimal(spec);
    CHECK(dec.apply(Decimal(1000)).to_fixed(8) == "14.45128320");
}

TEST_CASE("table rows carry 9-decimal strings") {
    cli::ExperimentConfig cfg = cli::parse_config(table_config("\"PicardS\""));
    auto table = cli::build_table(cfg);
    REQUIRE(table.header.size() == 2);
    CHECK(table.header[0] == "n");
    CHECK(table.header[1] == "PicardS");
    REQUIRE(table.rows.size() == 6);
    CHECK(table.rows[0][1] == "3.848449787");
    CHECK(table.rows[5][1] == "3.000000000");
    auto csv = cli::render_table_csv(table);
    CHECK(csv.substr(0, 10) == "n,PicardS\n");
}

TEST_CASE("table command reproduces the golden tables byte for byte") {
    const fs::path golden = FIXITER_GOLDEN_DIR;
    struct Case {
        const char* file;
        const char* schemes;
    } cases[] = {
        {"table1.csv", "\"PicardS\", \"S\""},
        {"table2.csv", "\"Picard\", \"SP\", \"CR\""},
        {"table3.csv", "\"Mann\", \"Ishikawa\", \"Noor\""},
    };
    for (const auto& c : cases) {
        CAPTURE(c.file);
        fs::path cfg = write_temp("fixiter_cfg.json", table_config(c.schemes));
        fs::path out = fs::temp_directory_path() / "fixiter_out.csv";
        int rc = run("table --config " + cfg.string() + " --out " + out.string());
        REQUIRE(rc == 0);
        CHECK(slurp(out) == slurp(golden / c.file));
    }
}

TEST_CASE("table reruns are byte-identical") {
    fs::path cfg = write_temp("fixiter_cfg.json", table_config("\"CR\", \"PicardS\""));
    fs::path out1 = fs::temp_directory_path() / "fixiter_rerun1.csv";
    fs::path out2 = fs::temp_directory_path() / "fixiter_rerun2.csv";
    REQUIRE(run("table --config " + cfg.string() + " --out " + out1.string()) == 0);
    REQUIRE(run("table --config " + cfg.string() + " --out " + out2.string()) == 0);
    CHECK(slurp(out1) == slurp(out2));
}

TEST_CASE("json table output carries the same cells") {
    cli::ExperimentConfig cfg = cli::parse_config(table_config("\"PicardS\""));
    auto table = cli::build_table(cfg);
    auto text = cli::render_table_json(table);
    CHECK(text.find("\"3.848449787\"") != std::string::npos);
    CHECK(text.find("\"header\"") != std::string::npos);
}

TEST_CASE("compare command emits a verdict") {
    fs::path cfg = write_temp("fixiter_cmp.json", table_config("\"PicardS\", \"Mann\""));
    std::ostringstream out, err;
    auto parsed = cli::load_config(cfg.string());
    int rc = cli::cmd_compare(parsed, SchemeId::PicardS, SchemeId::Mann, out, err);
    CHECK(rc == 0);
    CHECK(out.str().find("\"classification\": \"FasterA\"") != std::string::npos);
}

TEST_CASE("datadep command verifies the drift bound") {
    auto parsed = cli::parse_config(table_config("\"PicardS\""));
    parsed.eta1 = parsed.eta2 = 0.75;
    std::ostringstream out, err;
    int rc = cli::cmd_datadep(parsed, 0.05, 0.02, out, err);
    CHECK(rc == 0);
    CHECK(out.str().find("\"satisfied\": true") != std::string::npos);

    std::ostringstream out2, err2;
    auto weak = parsed;
    weak.eta1 = weak.eta2 = 0.5;
    CHECK(cli::cmd_datadep(weak, 0.05, 0.02, out2, err2) == 2);
    CHECK(err2.str().find("eta1*eta2") != std::string::npos);
    std::ostringstream out3, err3;
    CHECK(cli::cmd_datadep(parsed, 0.05, 0.2, out3, err3) == 2);
}

TEST_CASE("command exit codes follow the contract") {
    fs::path bad = write_temp("fixiter_bad.json", "{ not json");
    CHECK(run("table --config " + bad.string()) == 2);
    CHECK(run("table --config /nonexistent/cfg.json") == 2);
    CHECK(run("bogus-subcommand") == 2);

    fs::path dde_ok = write_temp("fixiter_dde.json", R"({
      "t0": 0.0, "b": 0.4, "tau": 0.2, "lipschitz": 1.0,
      "rhs": "v", "history": "1"
    })");
    fs::path sol = fs::temp_directory_path() / "fixiter_sol.csv";
    CHECK(run("dde --problem " + dde_ok.string() +
              " --step 0.01 --tol 1e-10 --out " + sol.string()) == 0);
    std::string csv = slurp(sol);
    CHECK(csv.substr(0, 4) == "t,x\n");

    fs::path dde_bad = write_temp("fixiter_dde_bad.json", R"({
      "t0": 0.0, "b": 0.6, "tau": 0.2, "lipschitz": 1.0,
      "rhs": "v", "history": "1"
    })");
    CHECK(run("dde --problem " + dde_bad.string() +
              " --step 0.01 --tol 1e-10 --out " + sol.string()) == 4);

    // An iteration cap of one cannot reach the tolerance: numerical failure.
    std::string capped = "FIXITER_MAX_ITERS=1 " + std::string(FIXITER_BIN) + " dde --problem " +
                         dde_ok.string() + " --step 0.01 --tol 1e-15 --out " + sol.string() +
                         " >/dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(capped.c_str())) == 3);
}

TEST_CASE("environment override caps the table length") {
    fs::path cfg = write_temp("fixiter_env.json", table_config("\"Mann\""));
    fs::path out = fs::temp_directory_path() / "fixiter_env_out.csv";
    std::string cmd = "FIXITER_MAX_ITERS=5 " + std::string(FIXITER_BIN) + " table --config " +
                      cfg.string() + " --out " + out.string() + " >/dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    std::istringstream is(slurp(out));
    std::string line;
    int lines = 0;
    while (std::getline(is, line)) ++lines;
    CHECK(lines == 6);  // header + five rows
}
