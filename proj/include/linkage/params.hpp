#pragma once

#include <string>
#include <vector>

namespace linkage {

/// Structural parameters of the two-country location-choice model.
/// Wages are normalized to one, so F and L are in labor units and all
/// flow values are in numeraire units.
struct ModelParams {
    double sigma;     ///< elasticity of substitution between varieties (> 1)
    double mu;        ///< local-intermediate cost share of host domestic firms, in (0,1)
    double mu_m;      ///< local-intermediate cost share of multinationals, in (0,1)
    double alpha;     ///< expenditure share on differentiated goods, in (0,1]
    double a;         ///< host marginal-input parameter (> 0)
    double a_m;       ///< multinational marginal-input parameter (> 0)
    double p_u_star;  ///< free-on-board foreign input price (>= 1)
    double tau;       ///< international trade cost factor (>= 1)
    double L;         ///< host workforce (> 0)
    double F;         ///< fixed labor input of host domestic firms (> 0)
    double K_f;       ///< total foreign capital stock (> 0)
    double D_star;    ///< foreign market-size constant E*(P*)^(sigma-1) (> 0)
};

/// A point of the phase plane at model time t.
struct State {
    double N;    ///< mass of host domestic firms
    double N_m;  ///< mass of multinationals located in the host country
    double t;    ///< model time
};

/// One failed model assumption, named so callers can report it.
struct Violation {
    std::string assumption;
    std::string detail;
};

/// Checks field bounds plus the slope condition alpha > 1 - (1-mu)/mu_m
/// and the capital-abundance condition K_f > Theta * Nbar^((1-mu-mu_m)/(1-mu)) * (1-alpha).
/// Returns an empty list iff all hold; never throws.
std::vector<Violation> validate(const ModelParams& p);

bool is_valid(const ModelParams& p);

/// Snapshot of the derived model constants for hot loops.
struct DerivedConstants {
    double N_bar;  ///< labor-feasible maximum of N
    double N_0;    ///< capital-return arbitrage threshold of N
    double Theta;  ///< free-entry locus coefficient
    double F_a;    ///< below this F only the coexistence equilibrium exists
    double F_b;    ///< above this F only the local-only equilibrium exists
};

DerivedConstants derive(const ModelParams& p);

}  // namespace linkage
