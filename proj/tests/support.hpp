#pragma once

#include <cmath>
#include <random>
#include <stdexcept>

#include "linkage/core.hpp"
#include "linkage/params.hpp"

namespace testsup {

/// Multiple-equilibria benchmark point used throughout the suite:
/// Nbar = 2, N_0 = 1.728, Theta = 23.04, F_a ~ 16.20, F_b ~ 23.15.
inline linkage::ModelParams reference_params() {
    linkage::ModelParams p;
    p.sigma = 4.0;
    p.mu = 0.5;
    p.mu_m = 0.5;
    p.alpha = 0.7;
    p.a = 1.0;
    p.a_m = 1.0;
    p.p_u_star = 1.0;
    p.tau = 1.44;
    p.L = 100.0;
    p.F = 20.0;
    p.K_f = 10.0;
    p.D_star = 10.0;
    return p;
}

enum class Regime { S1Only, Multiple, S2Only, Any };

/// Random valid parameter draw. `tau_above_one` forces tau > 1; `regime`
/// places F relative to the thresholds.
inline linkage::ModelParams random_params(std::mt19937_64& rng, Regime regime = Regime::Any,
                                          bool tau_above_one = true) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int tries = 0; tries < 1000; ++tries) {
        linkage::ModelParams p;
        p.sigma = 2.0 + 4.0 * u(rng);
        p.mu = 0.2 + 0.5 * u(rng);
        p.mu_m = 0.2 + 0.6 * u(rng);
        const double alpha_floor = std::max(0.05, 1.0 - (1.0 - p.mu) / p.mu_m + 0.05);
        if (alpha_floor >= 0.99) continue;
        p.alpha = alpha_floor + (0.99 - alpha_floor) * u(rng);
        p.a = 0.6 + 0.9 * u(rng);
        p.a_m = 0.6 + 1.2 * u(rng);
        p.p_u_star = 1.0 + 0.5 * u(rng);
        p.tau = tau_above_one ? 1.05 + 0.95 * u(rng) : 1.0;
        p.L = 50.0 + 150.0 * u(rng);
        p.D_star = 5.0 + 45.0 * u(rng);
        p.F = 1.0;  // placeholder until the regime is chosen
        const double n0 = linkage::n_zero(p);
        const double lf = p.sigma * (1.0 - p.mu) + p.mu;
        const double f_b = p.L / (n0 * lf);
        const double f_a = p.alpha * f_b;
        switch (regime) {
            case Regime::S1Only: p.F = f_a * (0.3 + 0.6 * u(rng)); break;
            case Regime::Multiple: p.F = f_a + (f_b - f_a) * (0.1 + 0.8 * u(rng)); break;
            case Regime::S2Only: p.F = f_b * (1.1 + 0.8 * u(rng)); break;
            case Regime::Any: p.F = f_a * (0.3 + u(rng) * (f_b / f_a)); break;
        }
        const double nbar = linkage::n_bar(p);
        if (nbar < 0.05 || nbar > 1e4) continue;
        const double locus_top = linkage::pi_zero_locus(nbar, p);
        p.K_f = std::max(1e-3, locus_top) * (1.3 + 2.0 * u(rng));
        if (linkage::is_valid(p)) return p;
    }
    throw std::runtime_error("random_params: no valid draw found");
}

inline double rel_diff(double got, double want) {
    const double scale = std::max({std::abs(got), std::abs(want), 1e-300});
    return std::abs(got - want) / scale;
}

/// Central finite difference with relative step h_rel.
template <class F>
double central_diff(F f, double x, double h_rel = 1e-6) {
    const double h = h_rel * std::max(1.0, std::abs(x));
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace testsup
