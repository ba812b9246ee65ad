#include "linkage/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "linkage/io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace linkage {

namespace {

const std::set<std::string> kCommands = {"loci", "equilibria", "phase", "basin", "shock",
                                         "statics", "het", "timing", "ext", "sweep"};

double* field_by_name(ModelParams& p, const std::string& name) {
    if (name == "sigma") return &p.sigma;
    if (name == "mu") return &p.mu;
    if (name == "mu_m") return &p.mu_m;
    if (name == "alpha") return &p.alpha;
    if (name == "a") return &p.a;
    if (name == "a_m") return &p.a_m;
    if (name == "p_u_star") return &p.p_u_star;
    if (name == "tau") return &p.tau;
    if (name == "L") return &p.L;
    if (name == "F") return &p.F;
    if (name == "K_f") return &p.K_f;
    if (name == "D_star") return &p.D_star;
    return nullptr;
}

void require_valid(const ModelParams& p) {
    const auto violations = validate(p);
    if (!violations.empty())
        throw ConfigError("invalid model: " + violations.front().assumption + " (" +
                          violations.front().detail + ")");
}

HetParams het_from_config(const Scenario& s) {
    const ConfigNode& b = s.raw.block("het");
    HetParams h;
    h.base = s.model;
    h.rho = b.number("rho");
    h.a_m_max = b.number("a_m_max");
    h.gamma = b.number("gamma");
    const auto violations = validate_het(h);
    if (!violations.empty())
        throw ConfigError("invalid het block: " + violations.front().assumption);
    return h;
}

SourcingParams sourcing_from_config(const Scenario& s) {
    const ConfigNode& b = s.raw.block("sourcing");
    SourcingParams sp;
    sp.base = s.model;
    sp.mu_m_H = b.number("mu_m_H");
    sp.mu_m_L = b.number("mu_m_L");
    sp.F_H = b.number("F_H");
    sp.F_L = b.number("F_L");
    const auto violations = validate_sourcing(sp);
    if (!violations.empty())
        throw ConfigError("invalid sourcing block: " + violations.front().assumption);
    return sp;
}

struct Artifact {
    std::string name;
    std::string content;
};

std::vector<Artifact> build_artifacts(const Scenario& s) {
    const ModelParams& p = s.model;
    const std::uint64_t hash = param_hash(p);
    std::vector<Artifact> artifacts;
    nlohmann::json j;

    if (s.command == "loci") {
        CsvWriter csv("loci", hash, {"N", "pi_zero_N_m", "delta_r"});
        const double nbar = n_bar(p);
        const int points = std::max(2, s.resolution);
        for (int i = 1; i <= points; ++i) {
            const double N = nbar * i / points;
            csv.add_row({N, pi_zero_locus(N, p), delta_r(N, p)});
        }
        artifacts.push_back({"loci.csv", csv.str()});
    } else if (s.command == "equilibria") {
        j["equilibria"] = find_equilibria(p);
        j["F_a"] = derive(p).F_a;
        j["F_b"] = derive(p).F_b;
        j["regime"] = regime_label(p);
        artifacts.push_back({"equilibria.json", j.dump(2) + "\n"});
    } else if (s.command == "phase") {
        const ConfigNode& init = s.raw.block("initial");
        State start{init.number("N"), init.number("N_m"), 0.0};
        IntegrationOptions opts = s.dyn;
        if (opts.record_every <= 0) opts.record_every = 1;
        const Trajectory traj = integrate(start, p, opts);
        CsvWriter csv("phase", hash, {"t", "N", "N_m"});
        for (const auto& st : traj.points) csv.add_row({st.t, st.N, st.N_m});
        artifacts.push_back({"trajectory.csv", csv.str()});
        nlohmann::json tj;
        tj["converged"] = traj.converged;
        tj["terminal"] = traj.terminal ? to_string(*traj.terminal) : "horizon reached";
        artifacts.push_back({"trajectory.json", tj.dump(2) + "\n"});
    } else if (s.command == "basin") {
        const BasinMap map = basin_map(p, s.resolution, s.dyn, s.threads);
        CsvWriter csv("basin", hash, {"N", "N_m", "label"});
        for (int row = 0; row < map.resolution; ++row)
            for (int col = 0; col < map.resolution; ++col)
                csv.add_row_mixed({format_double(map.n_centers[col]),
                                   format_double(map.nm_centers[row]),
                                   to_string(map.at(row, col))});
        artifacts.push_back({"basin.csv", csv.str()});
    } else if (s.command == "shock") {
        const ConfigNode& b = s.raw.block("shock");
        ShockSpec spec{shock_kind_from_string(b.word("kind")), b.number("magnitude")};
        const auto [post, verdict] = apply_shock(p, spec);
        j = verdict;
        j["post_F"] = post.params.F;
        artifacts.push_back({"shock.json", j.dump(2) + "\n"});
    } else if (s.command == "statics") {
        const DerivedConstants d = derive(p);
        j["delta_f_min"] = delta_f_min(p);
        j["d_delta_f_min_d_mu_m"] = d_delta_f_min_d_mu_m(p);
        j["d_delta_f_min_d_tau"] = d_delta_f_min_d_tau(p);
        j["mu_monotonicity_condition"] = mu_monotonicity_condition(p);
        j["F_a"] = d.F_a;
        j["F_b"] = d.F_b;
        j["N_0"] = d.N_0;
        j["N_bar"] = d.N_bar;
        artifacts.push_back({"statics.json", j.dump(2) + "\n"});
    } else if (s.command == "het") {
        const HetParams h = het_from_config(s);
        const HetLoci loci = het_thresholds(h);
        j["N_tilde_0"] = loci.N_tilde_0;
        j["F_tilde_a"] = loci.F_tilde_a;
        j["F_tilde_b"] = loci.F_tilde_b;
        j["K_tilde_f"] = loci.K_tilde_f;
        j["multiple"] = loci.multiple;
        const ShiftSensitivity shift = shift_sensitivity(h);
        j["shift"] = {{"dNm_dF", shift.dNm_dF}, {"d2Nm_dF_dmum", shift.d2Nm_dF_dmum}};
        j["equilibria"] = het_equilibria(h);
        artifacts.push_back({"het.json", j.dump(2) + "\n"});

        CsvWriter csv("het", hash, {"N", "cutoff_N_m", "pi_zero_N_m", "a_m_R"});
        const double nbar = n_bar(p);
        const double lo = p.alpha * nbar;
        const int points = std::max(2, s.resolution);
        for (int i = 0; i <= points; ++i) {
            const double N = lo + (nbar - lo) * i / points;
            csv.add_row({N, cutoff_locus(N, h), pi_zero_locus_het(N, h),
                         cutoff_productivity(N, h)});
        }
        artifacts.push_back({"het_loci.csv", csv.str()});
    } else if (s.command == "timing") {
        const ConfigNode& b = s.raw.block("timing");
        const std::string kind = b.word("kind");
        if (kind == "recovery") {
            RecoveryProblem pr{p, b.number("delta"), b.number("T"), b.number("theta")};
            const auto violations = validate_recovery(pr);
            if (!violations.empty())
                throw ConfigError("invalid timing block: " + violations.front().assumption);
            j["kind"] = "recovery";
            j["T_hat"] = reentry_corner_horizon(pr);
            j["T_bar"] = reentry_concavity_bound(pr);
            j["solution"] = reentry_timing(pr);
        } else if (kind == "risk") {
            RiskProblem pr{p, b.number("F_prime"), b.number("lambda"),
                           b.number_or("theta", 0.0)};
            const auto violations = validate_risk(pr);
            if (!violations.empty())
                throw ConfigError("invalid timing block: " + violations.front().assumption);
            j["kind"] = "risk";
            j["r_m"] = risk_r_m(pr);
            j["r_m_prime"] = risk_r_m_prime(pr);
            j["r_f"] = risk_r_f(pr);
            j["solution"] = exit_timing_under_risk(pr);
        } else {
            throw ConfigError("timing kind must be recovery or risk");
        }
        artifacts.push_back({"timing.json", j.dump(2) + "\n"});
    } else if (s.command == "ext") {
        bool any = false;
        if (s.raw.has_block("host_market")) {
            any = true;
            HostMarketParams hm{p};
            const auto violations = validate_host_market(hm);
            if (!violations.empty())
                throw ConfigError("invalid host_market block: " +
                                  violations.front().assumption);
            const HostEquilibria eq = host_market_equilibria(hm);
            j["host_market"] = {{"config", to_string(eq.config)},
                                {"equilibria", eq.equilibria}};
            CsvWriter csv("ext", hash, {"N", "pi_zero_N_m", "delta_r_N_m"});
            const double nbar = n_bar(p);
            const int points = std::max(2, s.resolution);
            for (int i = 1; i <= points; ++i) {
                const double N = nbar * i / points;
                const auto dr = host_delta_r_locus(N, hm);
                csv.add_row_mixed({format_double(N),
                                   format_double(host_pi_zero_locus(N, hm)),
                                   dr ? format_double(*dr) : "asymptote"});
            }
            artifacts.push_back({"host_loci.csv", csv.str()});
        }
        if (s.raw.has_block("sourcing")) {
            any = true;
            const SourcingParams sp = sourcing_from_config(s);
            const SourcingThresholds t = sourcing_thresholds(sp);
            j["sourcing"] = {{"N_0", t.N_0}, {"N_1", t.N_1}, {"N_2", t.N_2},
                             {"F_b", t.F_b}, {"F_c", t.F_c}};
            if (s.raw.block("sourcing").has("F_prime")) {
                const double fp = s.raw.block("sourcing").number("F_prime");
                j["sourcing"]["shock"] = sourcing_shock(sp, fp);
            }
        }
        if (!any) throw ConfigError("ext command needs a host_market or sourcing block");
        artifacts.push_back({"ext.json", j.dump(2) + "\n"});
    } else if (s.command == "sweep") {
        const ConfigNode& b = s.raw.block("sweep");
        const std::string param = b.word("param");
        const double from = b.number("from");
        const double to = b.number("to");
        const int steps = b.integer("steps");
        if (steps < 1 || !(to > from)) throw ConfigError("sweep range is empty");
        {
            ModelParams probe = p;
            if (!field_by_name(probe, param))
                throw ConfigError("unknown sweep parameter: " + param);
        }
        CsvWriter csv("sweep", hash,
                      {"value", "regime", "F_a", "F_b", "delta_F_min", "valid"});
        std::vector<std::array<double, 4>> rows(steps + 1);
        std::vector<std::string> labels(steps + 1);
        std::vector<char> valid(steps + 1);  // not vector<bool>: parallel writes
#ifdef _OPENMP
        if (s.threads > 0) omp_set_num_threads(s.threads);
#pragma omp parallel for schedule(static)
#endif
        for (int i = 0; i <= steps; ++i) {
            ModelParams q = p;
            const double value = from + (to - from) * i / steps;
            *field_by_name(q, param) = value;
            const bool ok = is_valid(q);
            valid[i] = ok;
            if (ok) {
                const DerivedConstants d = derive(q);
                rows[i] = {value, d.F_a, d.F_b, delta_f_min(q)};
                labels[i] = regime_label(q);
            } else {
                rows[i] = {value, 0.0, 0.0, 0.0};
                labels[i] = "invalid";
            }
        }
        for (int i = 0; i <= steps; ++i)
            csv.add_row_mixed({format_double(rows[i][0]), labels[i],
                               format_double(rows[i][1]), format_double(rows[i][2]),
                               format_double(rows[i][3]), valid[i] ? "1" : "0"});
        artifacts.push_back({"sweep.csv", csv.str()});
    } else {
        throw ConfigError("unknown command: " + s.command);
    }
    return artifacts;
}

}  // namespace

ModelParams model_from_config(const ConfigNode& model_block) {
    ModelParams p{};
    p.sigma = model_block.number("sigma");
    p.mu = model_block.number("mu");
    p.mu_m = model_block.number("mu_m");
    p.alpha = model_block.number("alpha");
    p.a = model_block.number("a");
    p.a_m = model_block.number("a_m");
    p.p_u_star = model_block.number("p_u_star");
    p.tau = model_block.number("tau");
    p.L = model_block.number("L");
    p.F = model_block.number("F");
    p.K_f = model_block.number("K_f");
    p.D_star = model_block.number("D_star");
    return p;
}

Scenario scenario_from_config(const ConfigNode& cfg, const std::string& command_override,
                              const std::string& out_override) {
    Scenario s;
    s.raw = cfg;
    const std::string cfg_command = cfg.word_or("command", "");
    if (!command_override.empty() && !cfg_command.empty() && command_override != cfg_command)
        throw ConfigError("command mismatch: config says " + cfg_command +
                          ", command line says " + command_override);
    s.command = !command_override.empty() ? command_override : cfg_command;
    if (s.command.empty()) throw ConfigError("no command given");
    if (!kCommands.count(s.command)) throw ConfigError("unknown command: " + s.command);

    s.out_dir = !out_override.empty() ? out_override : cfg.word_or("output", "out");
    s.model = model_from_config(cfg.block("model"));
    require_valid(s.model);

    if (cfg.has_block("dynamics")) {
        const ConfigNode& d = cfg.block("dynamics");
        s.dyn.dt = d.number_or("dt", 0.0);
        s.dyn.horizon = d.number_or("horizon", s.dyn.horizon);
        s.dyn.n_floor_rel = d.number_or("n_floor_rel", s.dyn.n_floor_rel);
        s.dyn.speed_ratio = d.number_or("speed_ratio", s.dyn.speed_ratio);
        s.dyn.record_every = d.integer_or("record_every", s.dyn.record_every);
        s.resolution = d.integer_or("resolution", s.resolution);
    }
    return s;
}

std::string regime_label(const ModelParams& p) {
    const DerivedConstants d = derive(p);
    if (p.F < d.F_a) return "S1-only";
    if (p.F > d.F_b) return "S2-only";
    return "multiple";
}

std::pair<double, double> regime_boundaries(const ModelParams& p, double rel_tol) {
    const DerivedConstants d = derive(p);
    // Bracket each boundary with labels, then bisect on the label change.
    auto locate = [&](const std::string& low_label, double lo, double hi) {
        ModelParams q = p;
        for (int i = 0; i < 200 && (hi - lo) > rel_tol * hi; ++i) {
            const double mid = 0.5 * (lo + hi);
            q.F = mid;
            if (regime_label(q) == low_label)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    const double fa = locate("S1-only", 0.25 * d.F_a, 0.5 * (d.F_a + d.F_b));
    const double fb = locate("multiple", 0.5 * (d.F_a + d.F_b), 4.0 * d.F_b);
    return {fa, fb};
}

std::vector<std::string> run_scenario(const Scenario& s) {
    const std::vector<Artifact> artifacts = build_artifacts(s);
    std::filesystem::create_directories(s.out_dir);
    std::vector<std::string> written;
    for (const auto& a : artifacts) {
        const std::string path = (std::filesystem::path(s.out_dir) / a.name).string();
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + path);
        f << a.content;
        written.push_back(path);
    }
    return written;
}

}  // namespace linkage
