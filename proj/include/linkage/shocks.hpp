#pragma once

#include <string>
#include <vector>

#include "linkage/dynamics.hpp"
#include "linkage/params.hpp"

namespace linkage {

enum class ShockKind { FixedLabor, IntraNationalIceberg, MNEFixedCapital };

const char* to_string(ShockKind kind);

/// One disaster shock. Magnitude units: labor for FixedLabor (Delta F > 0),
/// multiplicative cost factors >= 1 for the other two kinds.
struct ShockSpec {
    ShockKind kind;
    double magnitude;
};

struct ShockVerdict {
    ShockKind kind = ShockKind::FixedLabor;
    double magnitude = 0.0;
    double threshold = 0.0;  ///< minimal magnitude that switches, same units as the shock
    bool switches = false;
    std::vector<Equilibrium> pre;
    std::vector<Equilibrium> post;
};

/// Post-shock model. The MNE fixed-capital shock is not expressible as plain
/// ModelParams: it rescales capital returns by 1/F_m, moving the arbitrage
/// threshold to n_zero * F_m^((1-mu)/mu_m) while leaving the free-entry locus alone.
struct ShockedModel {
    ModelParams params;
    double capital_fixed_cost = 1.0;  ///< F_m; 1 for the other shock kinds
};

/// Effective arbitrage threshold of a shocked model.
double shocked_n_zero(const ShockedModel& m);

/// Regime equilibria of a shocked model (same rules as find_equilibria).
std::vector<Equilibrium> shocked_equilibria(const ShockedModel& m);

/// Minimal fixed-labor shock that switches the equilibrium: F_b - F,
/// clamped to 0 when the economy is already in the local-only regime.
double delta_f_min(const ModelParams& p);

/// Applies one shock to an economy assumed at S1 pre-shock. Throws
/// std::domain_error on out-of-range magnitudes.
std::pair<ShockedModel, ShockVerdict> apply_shock(const ModelParams& p, const ShockSpec& shock);

/// d(Delta F_min)/d mu_m = L (sigma-1)(1-mu) ln(tau) / (mu_m^2 N_0 [sigma(1-mu)+mu]).
/// Nonnegative, zero exactly at tau = 1.
double d_delta_f_min_d_mu_m(const ModelParams& p);

/// d(Delta F_min)/d tau. Nonpositive; reported as exactly 0 at tau = 1 and as
/// -L (sigma-1)(1-mu)(1-mu_m) / (tau mu_m N_0 [sigma(1-mu)+mu]) for tau > 1.
double d_delta_f_min_d_tau(const ModelParams& p);

/// Sufficient condition a <= e^(1/sigma) (alpha Nbar)^(1/(sigma-1)) under which
/// Delta F_min increases with mu.
bool mu_monotonicity_condition(const ModelParams& p);

}  // namespace linkage
