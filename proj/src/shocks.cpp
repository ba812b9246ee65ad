#include "linkage/shocks.hpp"

#include <cmath>
#include <stdexcept>

namespace linkage {

const char* to_string(ShockKind kind) {
    switch (kind) {
        case ShockKind::FixedLabor: return "fixed_labor";
        case ShockKind::IntraNationalIceberg: return "iceberg";
        case ShockKind::MNEFixedCapital: return "mne_capital";
    }
    return "?";
}

double shocked_n_zero(const ShockedModel& m) {
    const ModelParams& p = m.params;
    return n_zero(p) * std::pow(m.capital_fixed_cost, (1.0 - p.mu) / p.mu_m);
}

std::vector<Equilibrium> shocked_equilibria(const ShockedModel& m) {
    if (m.capital_fixed_cost == 1.0) return find_equilibria(m.params);
    // Same regime rules with the arbitrage threshold moved right by the
    // capital fixed cost.
    const ModelParams& p = m.params;
    const double nbar = n_bar(p);
    const double n0 = shocked_n_zero(m);
    std::vector<Equilibrium> eqs;
    const Equilibrium s1{State{nbar, p.K_f, 0.0}, EqLabel::S1, true};
    const Equilibrium s2{State{p.alpha * nbar, 0.0, 0.0}, EqLabel::S2, true};
    if (n0 < p.alpha * nbar) {
        eqs.push_back(s1);
    } else if (n0 > nbar) {
        eqs.push_back(s2);
    } else {
        eqs.push_back(s1);
        eqs.push_back(s2);
        eqs.push_back({State{n0, pi_zero_locus(n0, p), 0.0}, EqLabel::U, false});
    }
    return eqs;
}

double delta_f_min(const ModelParams& p) {
    const DerivedConstants d = derive(p);
    if (p.F > d.F_b) return 0.0;
    return d.F_b - p.F;
}

std::pair<ShockedModel, ShockVerdict> apply_shock(const ModelParams& p, const ShockSpec& shock) {
    const DerivedConstants d = derive(p);
    ShockVerdict verdict;
    verdict.kind = shock.kind;
    verdict.magnitude = shock.magnitude;
    verdict.pre = find_equilibria(p);

    ShockedModel post{p, 1.0};
    switch (shock.kind) {
        case ShockKind::FixedLabor: {
            if (!(shock.magnitude > 0.0))
                throw std::domain_error("fixed-labor shock requires Delta F > 0");
            post.params.F = p.F + shock.magnitude;
            verdict.threshold = delta_f_min(p);
            verdict.switches = post.params.F > d.F_b;
            break;
        }
        case ShockKind::IntraNationalIceberg: {
            if (!(shock.magnitude >= 1.0))
                throw std::domain_error("iceberg shock requires tau_tilde >= 1");
            // The iceberg factor and a enter all loci multiplicatively.
            post.params.a = p.a * shock.magnitude;
            verdict.threshold = std::pow(d.N_bar / d.N_0, 1.0 / (p.sigma - 1.0));
            verdict.switches = n_zero(post.params) > d.N_bar;
            break;
        }
        case ShockKind::MNEFixedCapital: {
            if (!(shock.magnitude >= 1.0))
                throw std::domain_error("capital-cost shock requires F_m >= 1");
            post.capital_fixed_cost = shock.magnitude;
            verdict.threshold = std::pow(d.N_bar / d.N_0, p.mu_m / (1.0 - p.mu));
            verdict.switches = shocked_n_zero(post) > d.N_bar;
            break;
        }
    }
    verdict.post = shocked_equilibria(post);
    return {post, verdict};
}

double d_delta_f_min_d_mu_m(const ModelParams& p) {
    const double lf = p.sigma * (1.0 - p.mu) + p.mu;
    return p.L * (p.sigma - 1.0) * (1.0 - p.mu) * std::log(p.tau) /
           (p.mu_m * p.mu_m * n_zero(p) * lf);
}

double d_delta_f_min_d_tau(const ModelParams& p) {
    if (p.tau == 1.0) return 0.0;  // zero-trade-cost boundary of the admissible range
    const double lf = p.sigma * (1.0 - p.mu) + p.mu;
    return -p.L * (p.sigma - 1.0) * (1.0 - p.mu) * (1.0 - p.mu_m) /
           (p.tau * p.mu_m * n_zero(p) * lf);
}

bool mu_monotonicity_condition(const ModelParams& p) {
    const double bound =
        std::exp(1.0 / p.sigma) * std::pow(p.alpha * n_bar(p), 1.0 / (p.sigma - 1.0));
    return p.a <= bound;
}

}  // namespace linkage
