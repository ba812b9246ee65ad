#include "linkage/timing.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "linkage/core.hpp"

namespace linkage {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double p_m_pow_at(double N, const ModelParams& p) {
    const double log_cost = std::log(p.a_m) + p.mu_m / (1.0 - p.mu) * std::log(p.a) +
                            (1.0 - p.mu_m) * (std::log(p.tau) + std::log(p.p_u_star));
    return std::exp((1.0 - p.sigma) * log_cost + p.mu_m / (1.0 - p.mu) * std::log(N));
}

// Composite Simpson rule; n is rounded up to the next even panel count.
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (b <= a) return 0.0;
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace

const char* to_string(TimingBranch branch) {
    switch (branch) {
        case TimingBranch::CornerZero: return "corner-zero";
        case TimingBranch::Interior: return "interior";
        case TimingBranch::Never: return "never";
    }
    return "?";
}

double recovery_r_m(const ModelParams& p) {
    return p.D_star / p.sigma * p_m_pow_at(n_bar(p), p);
}

double recovery_r_f(const ModelParams& p) {
    return p.D_star / p.sigma *
           std::exp((1.0 - p.sigma) * (std::log(p.a_m) + std::log(p.p_u_star)));
}

std::vector<Violation> validate_recovery(const RecoveryProblem& pr) {
    std::vector<Violation> out = validate(pr.base);
    if (!(pr.delta > 0.0)) out.push_back({"delta-bound", "requires delta > 0"});
    if (!(pr.T > 0.0)) out.push_back({"T-bound", "requires T > 0"});
    if (!(pr.theta > 0.0)) out.push_back({"theta-bound", "requires theta > 0"});
    if (out.empty()) {
        const DerivedConstants d = derive(pr.base);
        if (!(pr.base.F <= d.F_b))
            out.push_back({"pre-shock-regime", "requires F <= F_b"});
        if (!(pr.base.F * std::exp(pr.delta * pr.T) > d.F_b))
            out.push_back({"initial-shock", "requires F e^(delta T) > F_b"});
    }
    return out;
}

double reentry_corner_horizon(const RecoveryProblem& pr) {
    const ModelParams& p = pr.base;
    const double ratio = recovery_r_m(p) / recovery_r_f(p);
    return (1.0 - p.mu) * std::log(ratio) / (pr.theta * pr.delta * p.mu_m);
}

double reentry_concavity_bound(const RecoveryProblem& pr) {
    const ModelParams& p = pr.base;
    return std::log((1.0 - p.mu) / (pr.delta * p.mu_m) * recovery_r_f(p) /
                    recovery_r_m(p)) /
           pr.theta;
}

double lifetime_return(const RecoveryProblem& pr, double t) {
    if (!(t >= 0.0 && t <= pr.T)) throw std::domain_error("lifetime_return: t outside [0, T]");
    const ModelParams& p = pr.base;
    const double r_m = recovery_r_m(p);
    const double r_f = recovery_r_f(p);
    const double k = pr.theta * pr.delta * p.mu_m / (1.0 - p.mu);
    const double foreign = simpson(
        [&](double s) { return std::exp(-pr.theta * s) * r_f; }, 0.0, t, 512);
    const double recovery = simpson(
        [&](double s) { return std::exp(-k * (pr.T - s)) * r_m; }, t, pr.T, 512);
    const double tail = std::exp(-pr.theta * pr.T) * r_m / pr.theta;
    return foreign + recovery + tail;
}

TimingSolution reentry_timing(const RecoveryProblem& pr) {
    const auto violations = validate_recovery(pr);
    if (!violations.empty())
        throw std::domain_error("reentry_timing: " + violations.front().assumption);

    const ModelParams& p = pr.base;
    const double r_m = recovery_r_m(p);
    const double r_f = recovery_r_f(p);
    const double log_ratio = std::log(r_m / r_f);
    const double k = pr.theta * pr.delta * p.mu_m / (1.0 - p.mu);

    TimingSolution sol;
    const double t_corner = reentry_corner_horizon(pr);
    if (pr.T <= t_corner) {
        sol.branch = TimingBranch::CornerZero;
        sol.t_star = 0.0;
        sol.foc_residual = r_f - std::exp(-k * pr.T) * r_m;
        sol.soc_value = 0.0;
        return sol;
    }

    const double t_hat = (pr.delta * p.mu_m * pr.T - (1.0 - p.mu) * log_ratio / pr.theta) /
                         (1.0 - p.mu + pr.delta * p.mu_m);
    const double foc = std::exp(-pr.theta * t_hat) * r_f - std::exp(-k * (pr.T - t_hat)) * r_m;
    const double soc = -pr.theta * std::exp(-pr.theta * t_hat) * r_f -
                       k * std::exp(-k * (pr.T - t_hat)) * r_m;

    bool concave = pr.T < reentry_concavity_bound(pr);
    if (!concave) {
        // T_bar is only sufficient; settle it with a second difference of the
        // quadrature objective around the candidate.
        const double h = std::max(1e-3, 1e-4 * pr.T);
        const double lo = std::max(0.0, t_hat - h);
        const double hi = std::min(pr.T, t_hat + h);
        const double second = lifetime_return(pr, lo) - 2.0 * lifetime_return(pr, t_hat) +
                              lifetime_return(pr, hi);
        concave = second < 0.0;
    }
    if (!concave) {
        sol.branch = TimingBranch::Never;
        sol.t_star = kInf;
        sol.foc_residual = foc;
        sol.soc_value = soc;
        return sol;
    }
    sol.branch = TimingBranch::Interior;
    sol.t_star = t_hat;
    sol.foc_residual = foc;
    sol.soc_value = soc;
    return sol;
}

double risk_r_m(const RiskProblem& pr) { return recovery_r_m(pr.base); }

double risk_r_m_prime(const RiskProblem& pr) {
    ModelParams shocked = pr.base;
    shocked.F = pr.F_prime;
    return recovery_r_m(shocked);
}

double risk_r_f(const RiskProblem& pr) { return recovery_r_f(pr.base); }

std::vector<Violation> validate_risk(const RiskProblem& pr) {
    std::vector<Violation> out = validate(pr.base);
    if (!(pr.lambda > 0.0)) out.push_back({"lambda-bound", "requires lambda > 0"});
    if (!(pr.theta >= 0.0)) out.push_back({"theta-bound", "requires theta >= 0"});
    if (out.empty()) {
        const DerivedConstants d = derive(pr.base);
        if (!(pr.F_prime > pr.base.F))
            out.push_back({"shock-direction", "requires F' > F"});
        if (!(pr.F_prime < d.F_b))
            out.push_back({"post-shock-regime", "requires F' < F_b"});
    }
    return out;
}

TimingSolution exit_timing_under_risk(const RiskProblem& pr) {
    const auto violations = validate_risk(pr);
    if (!violations.empty())
        throw std::domain_error("exit_timing_under_risk: " + violations.front().assumption);

    const double r_m = risk_r_m(pr);
    const double r_mp = risk_r_m_prime(pr);
    const double r_f = risk_r_f(pr);
    const double premium = r_m - r_mp;

    TimingSolution sol;
    if (r_f >= 2.0 * premium) {
        sol.branch = TimingBranch::CornerZero;
        sol.t_star = 0.0;
        sol.foc_residual = 2.0 * premium - r_f;
        sol.soc_value = 0.0;
        return sol;
    }
    const double x = 0.5 * (std::sqrt(1.0 + 4.0 * r_f / premium) - 1.0);  // e^(-lambda t)
    const double t_hat = -std::log(x) / pr.lambda;
    sol.branch = TimingBranch::Interior;
    sol.t_star = t_hat;
    sol.foc_residual = premium * (x * x + x) - r_f;
    sol.soc_value = -premium * pr.lambda * (2.0 * x * x + x);
    return sol;
}

double expected_return(const RiskProblem& pr, double t) {
    if (!(t >= 0.0)) throw std::domain_error("expected_return: t must be nonnegative");
    const double theta = pr.theta > 0.0 ? pr.theta : 1e-4;
    const double r_m = risk_r_m(pr);
    const double r_mp = risk_r_m_prime(pr);
    const double r_f = risk_r_f(pr);
    const double lam = pr.lambda;
    const double premium = r_m - r_mp;
    return r_f * std::exp(-theta * t) / theta +
           premium * ((1.0 - std::exp(-(theta + 2.0 * lam) * t)) / (theta + 2.0 * lam) +
                      (1.0 - std::exp(-(theta + lam) * t)) / (theta + lam));
}

}  // namespace linkage
