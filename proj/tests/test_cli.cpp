#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "linkage/config.hpp"
#include "linkage/io.hpp"
#include "linkage/scenario.hpp"
#include "support.hpp"

using namespace linkage;
namespace fs = std::filesystem;

namespace {

const char* kModelBlock = R"(
model {
  sigma = 4.0
  mu = 0.5
  mu_m = 0.5
  alpha = 0.7
  a = 1.0
  a_m = 1.0
  p_u_star = 1.0
  tau = 1.44
  L = 100.0
  F = 20.0
  K_f = 10.0
  D_star = 10.0
}
)";

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "linkage_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("config parser") {
    const ConfigNode cfg = parse_config(R"(
# top comment
command = equilibria
model {
  sigma = 4.0   # inline comment
  nested { key = 1 }
}
)");
    CHECK(cfg.word("command") == "equilibria");
    CHECK(cfg.block("model").number("sigma") == 4.0);
    CHECK(cfg.block("model").block("nested").integer("key") == 1);
    CHECK(cfg.number_or("missing", 7.0) == 7.0);

    CHECK_THROWS_AS(parse_config("a = 1\na = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("block {\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("}"), ConfigError);
    CHECK_THROWS_AS(parse_config("key value\n"), ConfigError);
    const ConfigNode bad = parse_config("x = 1.5extra\n");
    CHECK_THROWS_AS(bad.number("x"), ConfigError);
}

TEST_CASE("scenario construction") {
    const ConfigNode cfg = parse_config(std::string("command = equilibria\n") + kModelBlock);
    const Scenario s = scenario_from_config(cfg, "", "");
    CHECK(s.command == "equilibria");
    CHECK(s.model.sigma == 4.0);

    CHECK_THROWS_AS(scenario_from_config(cfg, "basin", ""), ConfigError);  // mismatch
    const ConfigNode bare = parse_config(kModelBlock);
    CHECK_THROWS_AS(scenario_from_config(bare, "", ""), ConfigError);  // no command
    CHECK_THROWS_AS(scenario_from_config(bare, "warp", ""), ConfigError);

    ConfigNode invalid = parse_config(std::string("command = loci\n") + kModelBlock);
    invalid.blocks["model"].values["sigma"] = "0.5";
    CHECK_THROWS_AS(scenario_from_config(invalid, "", ""), ConfigError);
}

TEST_CASE("equilibria and shock artifacts round-trip") {
    const fs::path dir = fresh_dir("eq");
    ConfigNode cfg = parse_config(std::string("command = equilibria\n") + kModelBlock);
    Scenario s = scenario_from_config(cfg, "", dir.string());
    const auto written = run_scenario(s);
    REQUIRE(written.size() == 1);

    const nlohmann::json j = nlohmann::json::parse(slurp(written[0]));
    const auto eqs = j.at("equilibria").get<std::vector<Equilibrium>>();
    REQUIRE(eqs.size() == 3);
    CHECK(j.at("regime") == "multiple");

    ConfigNode shock_cfg = parse_config(std::string("command = shock\n") + kModelBlock +
                                        "shock { kind = fixed_labor\n magnitude = 4.0 }\n");
    Scenario sh = scenario_from_config(shock_cfg, "", (dir / "shock").string());
    const auto shock_files = run_scenario(sh);
    const nlohmann::json sj = nlohmann::json::parse(slurp(shock_files[0]));
    const ShockVerdict verdict = sj.get<ShockVerdict>();
    CHECK(verdict.switches);  // 4.0 > 3.148
    CHECK(verdict.kind == ShockKind::FixedLabor);

    // Reserialize and compare field by field.
    nlohmann::json again = verdict;
    CHECK(again.at("threshold") == sj.at("threshold"));
    CHECK(again.at("post") == sj.at("post"));
}

TEST_CASE("timing artifacts round-trip") {
    const fs::path dir = fresh_dir("timing");
    ConfigNode cfg = parse_config(std::string("command = timing\n") + kModelBlock +
                                  "timing { kind = risk\n F_prime = 22.0\n lambda = 1.0 }\n");
    Scenario s = scenario_from_config(cfg, "", dir.string());
    const auto files = run_scenario(s);
    const nlohmann::json j = nlohmann::json::parse(slurp(files[0]));
    const TimingSolution sol = j.at("solution").get<TimingSolution>();
    CHECK((sol.branch == TimingBranch::Interior || sol.branch == TimingBranch::CornerZero));
    if (sol.branch == TimingBranch::Interior) CHECK(sol.t_star > 0.0);
}

TEST_CASE("deterministic emission") {
    ConfigNode cfg = parse_config(std::string("command = basin\n") + kModelBlock +
                                  "dynamics { resolution = 30 }\n");
    const fs::path d1 = fresh_dir("det1");
    const fs::path d2 = fresh_dir("det2");
    Scenario s1 = scenario_from_config(cfg, "", d1.string());
    s1.threads = 2;
    Scenario s2 = scenario_from_config(cfg, "", d2.string());
    s2.threads = 1;
    run_scenario(s1);
    run_scenario(s2);
    CHECK(slurp((d1 / "basin.csv").string()) == slurp((d2 / "basin.csv").string()));

    ConfigNode sweep_cfg =
        parse_config(std::string("command = sweep\n") + kModelBlock +
                     "sweep { param = F\n from = 10.0\n to = 50.0\n steps = 64 }\n");
    const fs::path d3 = fresh_dir("det3");
    const fs::path d4 = fresh_dir("det4");
    run_scenario(scenario_from_config(sweep_cfg, "", d3.string()));
    run_scenario(scenario_from_config(sweep_cfg, "", d4.string()));
    CHECK(slurp((d3 / "sweep.csv").string()) == slurp((d4 / "sweep.csv").string()));
}

TEST_CASE("sweep crosses the two regime boundaries once each") {
    ModelParams p = testsup::reference_params();
    const DerivedConstants d = derive(p);
    std::ostringstream cfg_text;
    cfg_text << "command = sweep\n"
             << kModelBlock << "sweep { param = F\n from = " << d.F_a / 2.0
             << "\n to = " << 2.0 * d.F_b << "\n steps = 400 }\n";
    ConfigNode swept = parse_config(cfg_text.str());
    swept.blocks["model"].values["K_f"] = "25.0";  // keep capital ample over the range
    const fs::path dir = fresh_dir("sweep");
    run_scenario(scenario_from_config(swept, "", dir.string()));

    std::istringstream csv(slurp((dir / "sweep.csv").string()));
    std::string line;
    std::getline(csv, line);  // provenance
    std::getline(csv, line);  // header
    std::vector<std::string> regimes;
    while (std::getline(csv, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        regimes.push_back(line.substr(c1 + 1, c2 - c1 - 1));
    }
    int transitions = 0;
    for (std::size_t i = 1; i < regimes.size(); ++i)
        if (regimes[i] != regimes[i - 1]) ++transitions;
    CHECK(transitions == 2);
    CHECK(regimes.front() == "S1-only");
    CHECK(regimes.back() == "S2-only");

    // Boundary location by bisection against the closed forms.
    const auto [fa, fb] = regime_boundaries(p);
    CHECK(testsup::rel_diff(fa, d.F_a) < 1e-9);
    CHECK(testsup::rel_diff(fb, d.F_b) < 1e-9);
}

TEST_CASE("sweeping tau lowers the switching threshold") {
    ConfigNode cfg =
        parse_config(std::string("command = sweep\n") + kModelBlock +
                     "sweep { param = tau\n from = 1.0\n to = 2.0\n steps = 50 }\n");
    cfg.blocks["model"].values["K_f"] = "25.0";
    const fs::path dir = fresh_dir("sweep_tau");
    run_scenario(scenario_from_config(cfg, "", dir.string()));
    std::istringstream csv(slurp((dir / "sweep.csv").string()));
    std::string line;
    std::getline(csv, line);
    std::getline(csv, line);
    double prev = 1e300;
    while (std::getline(csv, line)) {
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() == 6);
        REQUIRE(cells[5] == "1");
        const double dfmin = std::stod(cells[4]);
        CHECK(dfmin <= prev + 1e-12);
        prev = dfmin;
    }
}

TEST_CASE("sweep flags invalid rows and keeps going") {
    ConfigNode cfg =
        parse_config(std::string("command = sweep\n") + kModelBlock +
                     "sweep { param = mu_m\n from = 0.3\n to = 0.95\n steps = 40 }\n");
    const fs::path dir = fresh_dir("sweep_mum");
    run_scenario(scenario_from_config(cfg, "", dir.string()));
    std::istringstream csv(slurp((dir / "sweep.csv").string()));
    std::string line;
    std::getline(csv, line);
    std::getline(csv, line);
    int valid = 0, invalid = 0;
    while (std::getline(csv, line)) {
        if (line.back() == '1')
            ++valid;
        else
            ++invalid;
    }
    CHECK(valid > 0);
    CHECK(invalid > 0);  // slope condition fails at high mu_m with alpha = 0.7

    // An empty range is rejected outright.
    ConfigNode empty =
        parse_config(std::string("command = sweep\n") + kModelBlock +
                     "sweep { param = F\n from = 10.0\n to = 10.0\n steps = 5 }\n");
    const Scenario s = scenario_from_config(empty, "", dir.string());
    CHECK_THROWS_AS(run_scenario(s), ConfigError);
}

TEST_CASE("phase command records the trajectory") {
    ConfigNode cfg = parse_config(std::string("command = phase\n") + kModelBlock +
                                  "initial { N = 1.9\n N_m = 9.0 }\n"
                                  "dynamics { record_every = 50 }\n");
    const fs::path dir = fresh_dir("phase");
    run_scenario(scenario_from_config(cfg, "", dir.string()));
    const std::string body = slurp((dir / "trajectory.csv").string());
    CHECK(body.find("t,N,N_m") != std::string::npos);
    CHECK(body.find("# command=phase") != std::string::npos);
    const nlohmann::json j = nlohmann::json::parse(slurp((dir / "trajectory.json").string()));
    CHECK(j.at("terminal") == "S1");
}

TEST_CASE("het and ext scenario artifacts") {
    ConfigNode het_cfg = parse_config(std::string("command = het\n") + kModelBlock +
                                      "het { rho = 5.0\n a_m_max = 3.0\n gamma = 0.5 }\n");
    het_cfg.blocks["model"].values["a"] = "1.1";
    het_cfg.blocks["model"].values["D_star"] = "340.0";
    const fs::path dir = fresh_dir("het");
    run_scenario(scenario_from_config(het_cfg, "", dir.string()));
    const nlohmann::json j = nlohmann::json::parse(slurp((dir / "het.json").string()));
    CHECK(j.at("multiple").get<bool>());
    CHECK(slurp((dir / "het_loci.csv").string()).find("a_m_R") != std::string::npos);

    ConfigNode ext_cfg = parse_config(
        std::string("command = ext\n") + kModelBlock +
        "sourcing { mu_m_H = 0.6\n mu_m_L = 0.3\n F_H = 2.0\n F_L = 1.2\n F_prime = 20.0 }\n");
    ext_cfg.blocks["model"].values["F"] = "10.0";
    ext_cfg.blocks["model"].values["tau"] = "1.05";
    const fs::path edir = fresh_dir("ext");
    run_scenario(scenario_from_config(ext_cfg, "", edir.string()));
    const nlohmann::json ej = nlohmann::json::parse(slurp((edir / "ext.json").string()));
    const SourcingOutcome outcome = ej.at("sourcing").at("shock").get<SourcingOutcome>();
    CHECK(outcome.verdict == SourcingVerdict::SwitchToL);
}

TEST_CASE("the never branch serializes by name, without a float infinity") {
    TimingSolution never{TimingBranch::Never, std::numeric_limits<double>::infinity(), 0.1,
                         0.2};
    const nlohmann::json j = never;
    CHECK_FALSE(j.contains("t_star"));
    CHECK(j.dump().find("inf") == std::string::npos);
    const TimingSolution back = j.get<TimingSolution>();
    CHECK(back.branch == TimingBranch::Never);
    CHECK(std::isinf(back.t_star));
}

TEST_CASE("csv floats survive a parse round-trip") {
    CsvWriter csv("probe", 0x1234, {"x"});
    const double vals[] = {1.0 / 3.0, 2.5e-17, 1.44, 6.912, 1e300};
    for (double v : vals) csv.add_row({v});
    std::istringstream body(csv.str());
    std::string line;
    std::getline(body, line);
    std::getline(body, line);
    for (double v : vals) {
        std::getline(body, line);
        CHECK(std::stod(line) == v);
    }
}
