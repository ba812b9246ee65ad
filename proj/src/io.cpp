#include "linkage/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace linkage {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t param_hash(const ModelParams& p) {
    const double fields[] = {p.sigma, p.mu,  p.mu_m, p.alpha, p.a,   p.a_m,
                             p.p_u_star, p.tau, p.L,    p.F,     p.K_f, p.D_star};
    std::uint64_t h = 1469598103934665603ull;
    for (double f : fields) {
        for (char c : format_double(f)) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
        h ^= '|';
        h *= 1099511628211ull;
    }
    return h;
}

CsvWriter::CsvWriter(std::string command, std::uint64_t hash,
                     std::vector<std::string> columns)
    : n_cols_(columns.size()) {
    char hash_buf[20];
    std::snprintf(hash_buf, sizeof hash_buf, "%016llx",
                  static_cast<unsigned long long>(hash));
    header_ = "# command=" + command + " params=" + hash_buf + "\n";
    std::string row;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) row += ',';
        row += columns[i];
    }
    header_ += row + "\n";
}

void CsvWriter::add_row(const std::vector<double>& values) {
    if (values.size() != n_cols_) throw std::invalid_argument("CsvWriter: column mismatch");
    std::string row;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) row += ',';
        row += format_double(values[i]);
    }
    rows_.push_back(row + "\n");
}

void CsvWriter::add_row_mixed(const std::vector<std::string>& values) {
    if (values.size() != n_cols_) throw std::invalid_argument("CsvWriter: column mismatch");
    std::string row;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) row += ',';
        row += values[i];
    }
    rows_.push_back(row + "\n");
}

std::string CsvWriter::str() const {
    std::string out = header_;
    for (const auto& r : rows_) out += r;
    return out;
}

void CsvWriter::write_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << str();
}

void to_json(nlohmann::json& j, const ModelParams& p) {
    j = {{"sigma", p.sigma}, {"mu", p.mu},           {"mu_m", p.mu_m}, {"alpha", p.alpha},
         {"a", p.a},         {"a_m", p.a_m},         {"p_u_star", p.p_u_star},
         {"tau", p.tau},     {"L", p.L},             {"F", p.F},
         {"K_f", p.K_f},     {"D_star", p.D_star}};
}

void from_json(const nlohmann::json& j, ModelParams& p) {
    j.at("sigma").get_to(p.sigma);
    j.at("mu").get_to(p.mu);
    j.at("mu_m").get_to(p.mu_m);
    j.at("alpha").get_to(p.alpha);
    j.at("a").get_to(p.a);
    j.at("a_m").get_to(p.a_m);
    j.at("p_u_star").get_to(p.p_u_star);
    j.at("tau").get_to(p.tau);
    j.at("L").get_to(p.L);
    j.at("F").get_to(p.F);
    j.at("K_f").get_to(p.K_f);
    j.at("D_star").get_to(p.D_star);
}

EqLabel eq_label_from_string(const std::string& s) {
    if (s == "S1") return EqLabel::S1;
    if (s == "S2") return EqLabel::S2;
    if (s == "U") return EqLabel::U;
    throw std::invalid_argument("unknown equilibrium label: " + s);
}

ShockKind shock_kind_from_string(const std::string& s) {
    if (s == "fixed_labor") return ShockKind::FixedLabor;
    if (s == "iceberg") return ShockKind::IntraNationalIceberg;
    if (s == "mne_capital") return ShockKind::MNEFixedCapital;
    throw std::invalid_argument("unknown shock kind: " + s);
}

TimingBranch timing_branch_from_string(const std::string& s) {
    if (s == "corner-zero") return TimingBranch::CornerZero;
    if (s == "interior") return TimingBranch::Interior;
    if (s == "never") return TimingBranch::Never;
    throw std::invalid_argument("unknown timing branch: " + s);
}

SourcingVerdict sourcing_verdict_from_string(const std::string& s) {
    if (s == "remain-H") return SourcingVerdict::RemainH;
    if (s == "switch-to-L") return SourcingVerdict::SwitchToL;
    if (s == "exit") return SourcingVerdict::Exit;
    throw std::invalid_argument("unknown sourcing verdict: " + s);
}

void to_json(nlohmann::json& j, const Equilibrium& e) {
    j = {{"N", e.location.N},
         {"N_m", e.location.N_m},
         {"label", to_string(e.label)},
         {"stable", e.stable}};
}

void from_json(const nlohmann::json& j, Equilibrium& e) {
    j.at("N").get_to(e.location.N);
    j.at("N_m").get_to(e.location.N_m);
    e.location.t = 0.0;
    e.label = eq_label_from_string(j.at("label").get<std::string>());
    j.at("stable").get_to(e.stable);
}

void to_json(nlohmann::json& j, const ShockVerdict& v) {
    j = {{"kind", to_string(v.kind)}, {"magnitude", v.magnitude},
         {"threshold", v.threshold},  {"switches", v.switches},
         {"pre", v.pre},              {"post", v.post}};
}

void from_json(const nlohmann::json& j, ShockVerdict& v) {
    v.kind = shock_kind_from_string(j.at("kind").get<std::string>());
    j.at("magnitude").get_to(v.magnitude);
    j.at("threshold").get_to(v.threshold);
    j.at("switches").get_to(v.switches);
    v.pre = j.at("pre").get<std::vector<Equilibrium>>();
    v.post = j.at("post").get<std::vector<Equilibrium>>();
}

void to_json(nlohmann::json& j, const TimingSolution& s) {
    j = {{"branch", to_string(s.branch)},
         {"foc_residual", s.foc_residual},
         {"soc_value", s.soc_value}};
    // The never branch is encoded by its name alone; no float infinities leak
    // into the output.
    if (s.branch != TimingBranch::Never) j["t_star"] = s.t_star;
}

void from_json(const nlohmann::json& j, TimingSolution& s) {
    s.branch = timing_branch_from_string(j.at("branch").get<std::string>());
    j.at("foc_residual").get_to(s.foc_residual);
    j.at("soc_value").get_to(s.soc_value);
    if (s.branch == TimingBranch::Never)
        s.t_star = std::numeric_limits<double>::infinity();
    else
        j.at("t_star").get_to(s.t_star);
}

void to_json(nlohmann::json& j, const SourcingOutcome& o) {
    j = {{"verdict", to_string(o.verdict)},
         {"threshold_low", o.threshold_low},
         {"threshold_high", o.threshold_high},
         {"new_N", o.new_N},
         {"new_N_m", o.new_N_m}};
}

void from_json(const nlohmann::json& j, SourcingOutcome& o) {
    o.verdict = sourcing_verdict_from_string(j.at("verdict").get<std::string>());
    j.at("threshold_low").get_to(o.threshold_low);
    j.at("threshold_high").get_to(o.threshold_high);
    j.at("new_N").get_to(o.new_N);
    j.at("new_N_m").get_to(o.new_N_m);
}

}  // namespace linkage
