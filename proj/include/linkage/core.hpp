#pragma once

#include "linkage/params.hpp"

namespace linkage {

/// CES price index of local varieties, P = a^(1/(1-mu)) * N^(1/((1-sigma)(1-mu))).
/// Strictly decreasing in N. Throws std::domain_error for N <= 0.
double price_index(double N, const ModelParams& p);

/// Labor-feasibility ceiling Nbar = L / (F * [sigma(1-mu) + mu]).
double n_bar(const ModelParams& p);

/// Arbitrage threshold N_0 = a^(sigma-1) * [tau^((1-mu_m)/mu_m) / p_u*]^((sigma-1)(1-mu)).
/// Foreign capital prefers the host country exactly when N exceeds it.
double n_zero(const ModelParams& p);

/// Coefficient Theta of the free-entry locus.
double theta(const ModelParams& p);

/// Free-entry locus: the N_m at which host domestic firms break even given N,
/// N_m = Theta * N^(-mu_m/(1-mu)) * (N - alpha*Nbar).
/// Negative for N < alpha*Nbar; callers interpret negative as "no multinationals needed".
double pi_zero_locus(double N, const ModelParams& p);

/// Revenue of a single host domestic firm, with expenditure fixed at alpha*L.
double firm_sales(double N, double N_m, const ModelParams& p);

/// Excess profit of a host domestic firm, pq/sigma - F. Its sign matches the
/// position of N_m relative to pi_zero_locus(N).
double excess_profit(double N, double N_m, const ModelParams& p);
double excess_profit(const State& s, const ModelParams& p);

/// Capital-return differential r_m - r_f. Strictly increasing in N, zero at n_zero.
double delta_r(double N, const ModelParams& p);

}  // namespace linkage
