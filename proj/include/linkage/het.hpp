#pragma once

#include <vector>

#include "linkage/dynamics.hpp"
#include "linkage/params.hpp"

namespace linkage {

/// Heterogeneous-productivity extension. Input requirements a_m are drawn from
/// a truncated Pareto on [1, a_m_max]; per-unit trade costs scale as a_m^gamma,
/// so the most productive firms ship at no cost. base.a_m and base.tau are
/// unused here (the draw and the schedule replace them).
struct HetParams {
    ModelParams base;
    double rho;      ///< Pareto shape (>= 1)
    double a_m_max;  ///< upper truncation of the draw (> 1)
    double gamma;    ///< scale-economy exponent of trade costs (> 0)
};

std::vector<Violation> validate_het(const HetParams& h);

/// rho - (sigma-1) [1 + gamma (1-mu_m)]; the locus exponent is rho/rho_tilde,
/// so the knife-edge rho_tilde = 0 is rejected at validation.
double rho_tilde(const HetParams& h);

/// Intercept of the cutoff locus: a^(sigma-1) p_u*^(-(sigma-1)(1-mu)).
double n_tilde_0(const HetParams& h);

/// Truncated Pareto CDF (a_m^rho - 1)/(a_m_max^rho - 1) on [1, a_m_max].
double pareto_cdf(double a_m, const HetParams& h);

/// Marginal located productivity draw given N (explicit solution of the
/// indifference condition). Unclamped; equals 1 at n_tilde_0.
double cutoff_productivity(double N, const HetParams& h);

/// Capital-indifference locus: mass of multinationals at which the marginal
/// located firm earns the same in either country. Zero at n_tilde_0,
/// strictly increasing in N.
double cutoff_locus(double N, const HetParams& h);

/// Free-entry locus of host domestic firms under the Pareto mix of located
/// multinationals. Throws std::domain_error when the inner base is <= 0.
double pi_zero_locus_het(double N, const HetParams& h);

struct HetLoci {
    double N_tilde_0;
    double F_tilde_a;
    double F_tilde_b;
    double K_tilde_f;
    bool multiple;  ///< F in (F_tilde_a, F_tilde_b] and K_f > K_tilde_f
};

HetLoci het_thresholds(const HetParams& h);

/// Shift diagnostics of the free-entry locus under a fixed-labor shock,
/// evaluated at fixed N (default alpha*Nbar).
struct ShiftSensitivity {
    double dNm_dF;        ///< upward shift per unit of F; positive
    double d2Nm_dF_dmum;  ///< mu_m-derivative of the shift
};

ShiftSensitivity shift_sensitivity(const HetParams& h);
ShiftSensitivity shift_sensitivity(const HetParams& h, double N);

/// Cutoff draw implied by a mass of located multinationals, clamped to the
/// Pareto support.
double cutoff_from_mass(double N_m, const HetParams& h);

/// Flow field off the loci: host-firm excess profits aggregate located
/// multinationals up to the current cutoff; capital moves by the marginal
/// firm's return differential.
double het_excess_profit(double N, double N_m, const HetParams& h);
double het_delta_r_marginal(double N, double N_m, const HetParams& h);

/// S1 (labor-bound N with the locus mass of multinationals), S2 (few, most
/// productive) and the separating saddle when the curves cross twice.
std::vector<Equilibrium> het_equilibria(const HetParams& h);

Trajectory integrate_het(const State& initial, const HetParams& h,
                         const IntegrationOptions& opts = {});

}  // namespace linkage
