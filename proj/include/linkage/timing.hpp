#pragma once

#include <vector>

#include "linkage/params.hpp"

namespace linkage {

/// Reentry after a temporary disaster. The fixed labor input recovers along
/// F(s) = F e^(delta (T - s)) and reaches the pre-shock level at time T; the
/// initial shock is large enough to empty the host country of multinationals.
struct RecoveryProblem {
    ModelParams base;  ///< pre-shock parameters with F <= F_b
    double delta;      ///< recovery rate (> 0)
    double T;          ///< full-recovery horizon (> 0)
    double theta;      ///< discount rate (> 0)
};

/// Exit under disaster risk: a shock of known size F' (< F_b) arrives at an
/// exponentially distributed time with rate lambda.
struct RiskProblem {
    ModelParams base;
    double F_prime;  ///< post-shock fixed labor input, F < F' < F_b
    double lambda;   ///< shock arrival rate (> 0)
    double theta = 0.0;  ///< discount rate; the closed forms take theta -> 0
};

std::vector<Violation> validate_recovery(const RecoveryProblem& pr);
std::vector<Violation> validate_risk(const RiskProblem& pr);

enum class TimingBranch { CornerZero, Interior, Never };

const char* to_string(TimingBranch branch);

struct TimingSolution {
    TimingBranch branch;
    double t_star;        ///< +infinity for the never branch
    double foc_residual;  ///< first-order condition residual at t_star
    double soc_value;     ///< second-order diagnostic (negative means concave)
};

/// Flow returns at the coexistence point: r_m at N = Nbar, r_f abroad.
double recovery_r_m(const ModelParams& p);
double recovery_r_f(const ModelParams& p);

/// Corner boundary T_hat: recoveries no longer than this make immediate
/// reentry optimal.
double reentry_corner_horizon(const RecoveryProblem& pr);

/// Sufficient-concavity bound T_bar of the reentry objective.
double reentry_concavity_bound(const RecoveryProblem& pr);

/// Optimal reentry time: 0 for T <= T_hat, otherwise
/// [delta mu_m T - ((1-mu)/theta) ln(r_m/r_f)] / (1 - mu + delta mu_m),
/// with a concavity check that falls back to a direct second difference of
/// the objective when T exceeds T_bar.
TimingSolution reentry_timing(const RecoveryProblem& pr);

/// Lifetime return of entering at time t, by numerical quadrature of the
/// foreign leg, the recovery leg and the steady tail.
double lifetime_return(const RecoveryProblem& pr, double t);

/// Post-shock flow returns of the risk problem.
double risk_r_m(const RiskProblem& pr);
double risk_r_m_prime(const RiskProblem& pr);
double risk_r_f(const RiskProblem& pr);

/// Optimal exit time under unknown shock timing: 0 when r_f >= 2 (r_m - r_m'),
/// otherwise -(1/lambda) ln[ (sqrt(1 + 4 r_f/(r_m - r_m')) - 1) / 2 ].
TimingSolution exit_timing_under_risk(const RiskProblem& pr);

/// Expected lifetime return of leaving at time t; the stationarity condition
/// in t reproduces the exit solver's first-order condition at any theta.
double expected_return(const RiskProblem& pr, double t);

}  // namespace linkage
