#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fermiblock/csv.hpp"
#include "fermiblock/experiments.hpp"

using namespace fermiblock;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const char* kThermalConfig = R"(
command = thermal-entry
[model]
type = lattice
dims = 8
boundary = open
hop = 0 0 bulk bulk : 1 : -1 0
[parameters]
beta = 0.5, 1, 2
eps_pa = 0.01
entry_i = 0
entry_j = 1
eps2 = 0.1
seed = 3
[outputs]
csv = thermal.csv
report = thermal.txt
)";

}  // namespace

TEST_CASE("csv formatting") {
    CsvTable t;
    t.header = {"a", "b"};
    CHECK(csv_to_string(t) == "a,b\n");  // header-only when empty

    t.add_row({"1.5", "plain"});
    t.add_row({"x,y", "he said \"hi\""});
    const std::string got = csv_to_string(t);
    CHECK(got.find("\"x,y\"") != std::string::npos);
    CHECK(got.find("\"he said \"\"hi\"\"\"") != std::string::npos);

    CHECK_THROWS_AS(t.add_row({"too-short"}), std::invalid_argument);

    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.0 / 3.0) == format_double(1.0 / 3.0));
}

TEST_CASE("config parsing: defaults and sweeps") {
    const auto cfg = parse_config(kThermalConfig);
    CHECK(cfg.command == "thermal-entry");
    CHECK(cfg.model.type == "lattice");
    CHECK(cfg.sweep("beta") == std::vector<double>{0.5, 1.0, 2.0});
    CHECK(cfg.delta == 0.05);  // default filled
    CHECK(cfg.seed == 3);
    CHECK(cfg.csv_path == "thermal.csv");

    const auto minimal = parse_config(
        "command = approx-bound\n[parameters]\nc = 4\nd = 100\n");
    CHECK(minimal.delta == 0.05);
    CHECK(minimal.seed == 0);
}

TEST_CASE("config parsing: every error is reported, not just the first") {
    const std::string bad = R"(
command = warp-drive
[parameters]
beta = -2
eps2 = abc
)";
    try {
        parse_config(bad);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.errors().size() >= 3);  // unknown command, missing model, bad beta, bad eps2
        bool mentions_beta = false, mentions_command = false;
        for (const auto& msg : e.errors()) {
            if (msg.find("beta") != std::string::npos) mentions_beta = true;
            if (msg.find("warp-drive") != std::string::npos) mentions_command = true;
        }
        CHECK(mentions_beta);
        CHECK(mentions_command);
    }
}

TEST_CASE("config parsing: model variants") {
    const auto marg = parse_config(
        "command = particle-density\n[model]\ntype = margulis\nN = 4\n"
        "[parameters]\nbeta = 1\nsamples = 10\n");
    CHECK(marg.model.margulis_n == 4);

    const auto sea = parse_config(
        "command = particle-density\n[model]\ntype = fermi-sea\nn = 3\nfill = 0.5\n"
        "[parameters]\nsamples = 0\n");
    CHECK(sea.model.fermi_n == 3);
    CHECK(sea.model.fermi_fill == 0.5);

    const auto clock = parse_config(
        "command = theorem1-demo\n[model]\ntype = clock\ngates = qubits 2; H 1; CNOT 1 2\n"
        "[parameters]\nt = 1\neps2 = 0.2\n");
    CHECK(clock.model.gates.length() == 2);

    CHECK_THROWS_AS(parse_config("command = thermal-entry\n[model]\ntype = blob\n"
                                 "[parameters]\nbeta = 1\n"),
                    ConfigError);
}

TEST_CASE("experiments produce deterministic artifacts") {
    const fs::path dir = fs::temp_directory_path() / "fermiblock_cli_test";
    fs::remove_all(dir);
    const auto cfg = parse_config(kThermalConfig);

    REQUIRE(run_experiment(cfg, (dir / "a").string()) == 0);
    REQUIRE(run_experiment(cfg, (dir / "b").string()) == 0);
    CHECK(slurp(dir / "a" / "thermal.csv") == slurp(dir / "b" / "thermal.csv"));

    // concurrency must not change the bytes
    REQUIRE(run_experiment(cfg, (dir / "c").string(), std::nullopt, 2) == 0);
    CHECK(slurp(dir / "a" / "thermal.csv") == slurp(dir / "c" / "thermal.csv"));

    // a different seed changes the sampled estimates
    REQUIRE(run_experiment(cfg, (dir / "d").string(), 99) == 0);
    CHECK(slurp(dir / "a" / "thermal.csv") != slurp(dir / "d" / "thermal.csv"));

    const std::string csv = slurp(dir / "a" / "thermal.csv");
    CHECK(csv.find("beta,i,j,estimate_re") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 sweep rows
    fs::remove_all(dir);
}

TEST_CASE("dynamics-entry at t = 0 returns the M0 entry") {
    const fs::path dir = fs::temp_directory_path() / "fermiblock_cli_dyn";
    fs::remove_all(dir);
    const auto cfg = parse_config(R"(
command = dynamics-entry
[model]
type = lattice
dims = 8
hop = 0 0 bulk bulk : 1 : -1 0
[parameters]
t = 0
m0_site = 4
entry_i = 4
entry_j = 4
eps2 = 0.05
seed = 5
)");
    REQUIRE(run_experiment(cfg, dir.string()) == 0);
    const std::string csv = slurp(dir / "out.csv");
    // second line, fourth column: estimate_re near 1 within alpha*eps2
    std::istringstream is(csv);
    std::string header, row;
    std::getline(is, header);
    std::getline(is, row);
    std::stringstream rs(row);
    std::string cell;
    for (int k = 0; k < 4; ++k) std::getline(rs, cell, ',');
    CHECK(std::abs(std::stod(cell) - 1.0) <= 0.05 + 1e-12);
    fs::remove_all(dir);
}

TEST_CASE("failed runs flush a truncation marker and exit nonzero") {
    const fs::path dir = fs::temp_directory_path() / "fermiblock_cli_fail";
    fs::remove_all(dir);
    auto cfg = parse_config(kThermalConfig);
    cfg.params["degree"] = {4.0};  // far below any 1e-2 certificate at beta = 2
    CHECK(run_experiment(cfg, dir.string()) != 0);
    const std::string csv = slurp(dir / "thermal.csv");
    CHECK(csv.find("#truncated:") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("every experiment command drives its pipeline") {
    const fs::path dir = fs::temp_directory_path() / "fermiblock_cli_all";
    fs::remove_all(dir);
    const char* lattice8 =
        "[model]\ntype = lattice\ndims = 8\nhop = 0 0 bulk bulk : 1 : -1 0\n";
    const std::vector<std::string> configs = {
        std::string("command = greens\n") + lattice8 +
            "[parameters]\nbeta = 2\neta = 1\nomega = 0\ndegree = 600\n"
            "entry_i = 0\nentry_j = 1\neps2 = 0.1\n",
        std::string("command = free-energy\n") + lattice8 +
            "[parameters]\nbeta = 1\ndegree = 400\nsamples = 0\n",
        std::string("command = energy-density\n") + lattice8 +
            "[parameters]\nbeta = 2\neps = 0.05\ntrials = 2\n",
        std::string("command = particle-density\n[model]\ntype = fermi-sea\nn = 3\n"
                    "fill = 0.5\n[parameters]\nsamples = 0\n"),
        std::string("command = theorem1-demo\n[model]\ntype = clock\n"
                    "gates = qubits 2; H 2; CNOT 2 1; X 1\n[parameters]\nt = 1\neps2 = 0.2\n"),
        std::string("command = baseline-compare\n") + lattice8 +
            "[parameters]\nbeta = 2\norder = 200\nn_entries = 3\n",
    };
    int idx = 0;
    for (const auto& text : configs) {
        const auto cfg = parse_config(text);
        const auto out = dir / std::to_string(idx++);
        REQUIRE(run_experiment(cfg, out.string()) == 0);
        const std::string csv = slurp(out / cfg.csv_path);
        CHECK(csv.find("#truncated") == std::string::npos);
        CHECK(std::count(csv.begin(), csv.end(), '\n') >= 2);  // header + data
    }
    // the fermi-sea particle density is exactly one half
    const std::string pd = slurp(dir / "3" / "out.csv");
    CHECK(pd.find(",0.5,0.5,0") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("emit_csv rejects unwritable paths") {
    CsvTable t;
    t.header = {"x"};
    CHECK_THROWS_AS(emit_csv(t, "/nonexistent_dir_fb/x.csv"), std::runtime_error);
}

TEST_CASE("clock-overlap and approx-bound run without a physical model") {
    const fs::path dir = fs::temp_directory_path() / "fermiblock_cli_misc";
    fs::remove_all(dir);

    const auto overlap = parse_config(
        "command = clock-overlap\n[parameters]\nL = 7\n"
        "[outputs]\ncsv = overlap.csv\nreport = overlap.txt\n");
    REQUIRE(run_experiment(overlap, dir.string()) == 0);
    const std::string report = slurp(dir / "overlap.txt");
    CHECK(report.find("max overlap") != std::string::npos);
    CHECK(report.find("reference") != std::string::npos);

    const auto bound = parse_config(
        "command = approx-bound\n[parameters]\nc = 4, 8\nd = 200, 500\n"
        "[outputs]\ncsv = bound.csv\nreport = bound.txt\n");
    REQUIRE(run_experiment(bound, dir.string()) == 0);
    const std::string csv = slurp(dir / "bound.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 rows
    // every row ends with within_bound = 1
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) CHECK(line.substr(line.size() - 2) == ",1");
    fs::remove_all(dir);
}
