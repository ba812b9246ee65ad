#pragma once

#include <optional>
#include <vector>

#include "linkage/dynamics.hpp"
#include "linkage/params.hpp"

namespace linkage {

/// Variant in which multinationals also serve the host final-goods market
/// while host domestic firms produce intermediates only.
struct HostMarketParams {
    ModelParams base;
};

/// Requires mu + mu_m < 1 (upward free-entry slope) and enough foreign capital
/// that the free-entry locus stays below K_f at the labor bound.
std::vector<Violation> validate_host_market(const HostMarketParams& hm);

/// Free-entry locus; root at alpha mu_m (sigma-1) Nbar / sigma.
double host_pi_zero_locus(double N, const HostMarketParams& hm);

/// Capital-indifference locus. Defined only left of the arbitrage threshold;
/// returns nullopt at and beyond it, where the curve runs off to its asymptote
/// and capital inflow is unconditional.
std::optional<double> host_delta_r_locus(double N, const HostMarketParams& hm);

/// Flow field: host demand adds alpha L / (sigma N_m) to the capital-return
/// differential.
double host_excess_profit(double N, double N_m, const HostMarketParams& hm);
double host_delta_r(double N, double N_m, const HostMarketParams& hm);
bool host_n_dot_positive(double N, double N_m, const HostMarketParams& hm);
bool host_nm_dot_positive(double N, double N_m, const HostMarketParams& hm);

enum class HostConfig { TwoStable, UniqueStable, Degenerate };

const char* to_string(HostConfig config);

struct HostEquilibria {
    HostConfig config;
    std::vector<Equilibrium> equilibria;  ///< S2 = full-entry corner, S1 = interior, U = saddle
};

/// Intersects the two loci (64 scan panels, then bisection) and classifies
/// interior candidates by the flow Jacobian. Tangencies are reported as
/// degenerate, never perturbed away.
HostEquilibria host_market_equilibria(const HostMarketParams& hm);

/// Endogenous sourcing intensity: entering capital picks the high-linkage
/// type H (cost share mu_m_H, fixed capital F_H) or the low-linkage type L.
struct SourcingParams {
    ModelParams base;  ///< base.mu_m is unused; the type choice replaces it
    double mu_m_H;
    double mu_m_L;  ///< mu_m_L < mu_m_H
    double F_H;
    double F_L;  ///< 1 < F_L < F_H
};

std::vector<Violation> validate_sourcing(const SourcingParams& sp);

struct SourcingThresholds {
    double N_0;  ///< r_m^L = r_f
    double N_1;  ///< r_m^H = r_m^L
    double N_2;  ///< r_m^H = r_f
    double F_b;  ///< shock size beyond which capital exits outright
    double F_c;  ///< shock size beyond which type H is abandoned
};

/// Closed-form thresholds; throws std::domain_error if the required ordering
/// N_1 > N_2 > N_0 fails, which signals inconsistent inputs.
SourcingThresholds sourcing_thresholds(const SourcingParams& sp);

enum class MneType { H, L };

/// Per-unit-of-capital return of a type-j multinational at N.
double sourcing_r_m(double N, const SourcingParams& sp, MneType type);
double sourcing_r_f(const SourcingParams& sp);

/// Free-entry locus given the type entrants would pick at N; discontinuous
/// at N_1. `forced` pins the type, for evaluating one-sided limits.
double sourcing_pi_zero_locus(double N, const SourcingParams& sp);
double sourcing_pi_zero_locus(double N, const SourcingParams& sp, MneType forced);

enum class SourcingVerdict { RemainH, SwitchToL, Exit };

const char* to_string(SourcingVerdict verdict);

struct SourcingOutcome {
    SourcingVerdict verdict;
    double threshold_low;   ///< F_c
    double threshold_high;  ///< F_b
    double new_N;
    double new_N_m;  ///< firm count; each firm absorbs F_H or F_L units of capital
};

/// Disaster verdict for a raise of the host fixed labor input to F'. The
/// economy starts at the all-H coexistence point, which requires Nbar > N_1.
SourcingOutcome sourcing_shock(const SourcingParams& sp, double F_prime);

}  // namespace linkage
