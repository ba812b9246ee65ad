#include "linkage/core.hpp"

#include <cmath>
#include <stdexcept>

namespace linkage {

namespace {

void require_positive_n(double N) {
    if (!(N > 0.0)) throw std::domain_error("N must be positive");
}

// sigma(1-mu) + mu, the labor-share denominator that shows up everywhere
double labor_factor(const ModelParams& p) { return p.sigma * (1.0 - p.mu) + p.mu; }

}  // namespace

std::vector<Violation> validate(const ModelParams& p) {
    std::vector<Violation> out;
    auto bad = [&out](const char* name, const std::string& detail) {
        out.push_back({name, detail});
    };
    if (!(p.sigma > 1.0)) bad("sigma-bound", "requires sigma > 1");
    if (!(p.mu > 0.0 && p.mu < 1.0)) bad("mu-bound", "requires 0 < mu < 1");
    if (!(p.mu_m > 0.0 && p.mu_m < 1.0)) bad("mu_m-bound", "requires 0 < mu_m < 1");
    if (!(p.alpha > 0.0 && p.alpha <= 1.0)) bad("alpha-bound", "requires 0 < alpha <= 1");
    if (!(p.tau >= 1.0)) bad("tau-bound", "requires tau >= 1");
    if (!(p.p_u_star >= 1.0)) bad("p_u_star-bound", "requires p_u_star >= 1");
    if (!(p.a > 0.0)) bad("a-bound", "requires a > 0");
    if (!(p.a_m > 0.0)) bad("a_m-bound", "requires a_m > 0");
    if (!(p.L > 0.0)) bad("L-bound", "requires L > 0");
    if (!(p.F > 0.0)) bad("F-bound", "requires F > 0");
    if (!(p.K_f > 0.0)) bad("K_f-bound", "requires K_f > 0");
    if (!(p.D_star > 0.0)) bad("D_star-bound", "requires D_star > 0");
    if (!out.empty()) return out;  // derived checks need sane fields

    if (!(p.alpha > 1.0 - (1.0 - p.mu) / p.mu_m))
        bad("slope-condition", "requires alpha > 1 - (1-mu)/mu_m");

    const double nbar = n_bar(p);
    const double cap = theta(p) * std::pow(nbar, (1.0 - p.mu - p.mu_m) / (1.0 - p.mu)) *
                       (1.0 - p.alpha);
    if (!(p.K_f > cap))
        bad("capital-abundance", "requires K_f > Theta*Nbar^((1-mu-mu_m)/(1-mu))*(1-alpha)");
    return out;
}

bool is_valid(const ModelParams& p) { return validate(p).empty(); }

double price_index(double N, const ModelParams& p) {
    require_positive_n(N);
    const double log_p = std::log(p.a) / (1.0 - p.mu) +
                         std::log(N) / ((1.0 - p.sigma) * (1.0 - p.mu));
    return std::exp(log_p);
}

double n_bar(const ModelParams& p) { return p.L / (p.F * labor_factor(p)); }

double n_zero(const ModelParams& p) {
    const double log_n0 =
        (p.sigma - 1.0) * std::log(p.a) +
        (p.sigma - 1.0) * (1.0 - p.mu) *
            ((1.0 - p.mu_m) / p.mu_m * std::log(p.tau) - std::log(p.p_u_star));
    return std::exp(log_n0);
}

double theta(const ModelParams& p) {
    const double log_cost =
        std::log(p.a_m) + p.mu_m / (1.0 - p.mu) * std::log(p.a) +
        (1.0 - p.mu_m) * (std::log(p.tau) + std::log(p.p_u_star));
    const double log_theta = std::log(p.sigma) + std::log(p.F) + std::log(labor_factor(p)) +
                             (p.sigma - 1.0) * log_cost - std::log(p.mu_m) -
                             std::log(p.D_star) - std::log(p.sigma - 1.0);
    return std::exp(log_theta);
}

double pi_zero_locus(double N, const ModelParams& p) {
    require_positive_n(N);
    return theta(p) * std::pow(N, -p.mu_m / (1.0 - p.mu)) * (N - p.alpha * n_bar(p));
}

namespace {

// p_m^(1-sigma) = [a_m a^(mu_m/(1-mu)) (tau p_u*)^(1-mu_m)]^(1-sigma) * N^(mu_m/(1-mu))
double p_m_pow(double N, const ModelParams& p) {
    const double log_cost =
        std::log(p.a_m) + p.mu_m / (1.0 - p.mu) * std::log(p.a) +
        (1.0 - p.mu_m) * (std::log(p.tau) + std::log(p.p_u_star));
    return std::exp((1.0 - p.sigma) * log_cost + p.mu_m / (1.0 - p.mu) * std::log(N));
}

}  // namespace

double firm_sales(double N, double N_m, const ModelParams& p) {
    require_positive_n(N);
    const double mne_demand =
        p.mu_m * (p.sigma - 1.0) / p.sigma * (N_m / N) * p_m_pow(N, p) * p.D_star;
    return p.sigma / labor_factor(p) * (p.alpha * p.L / N + mne_demand);
}

double excess_profit(double N, double N_m, const ModelParams& p) {
    return firm_sales(N, N_m, p) / p.sigma - p.F;
}

double excess_profit(const State& s, const ModelParams& p) {
    return excess_profit(s.N, s.N_m, p);
}

double delta_r(double N, const ModelParams& p) {
    require_positive_n(N);
    const double log_inner =
        (1.0 - p.sigma) * (p.mu_m / (1.0 - p.mu) * std::log(p.a) +
                           (1.0 - p.mu_m) * std::log(p.tau) - p.mu_m * std::log(p.p_u_star)) +
        p.mu_m / (1.0 - p.mu) * std::log(N);
    const double scale =
        p.D_star * std::exp((1.0 - p.sigma) * (std::log(p.a_m) + std::log(p.p_u_star)));
    return scale * (std::exp(log_inner) - 1.0) / p.sigma;
}

DerivedConstants derive(const ModelParams& p) {
    DerivedConstants d;
    d.N_bar = n_bar(p);
    d.N_0 = n_zero(p);
    d.Theta = theta(p);
    const double lf = labor_factor(p);
    d.F_b = p.L / (d.N_0 * lf);
    d.F_a = p.alpha * d.F_b;
    return d;
}

}  // namespace linkage
