#include "linkage/het.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace linkage {

namespace {

double labor_factor(const ModelParams& p) { return p.sigma * (1.0 - p.mu) + p.mu; }

// B = a^(mu_m/(1-mu)) p_u*^(1-mu_m); the composite input-cost base of located
// multinationals once the draw-specific parts are integrated out.
double log_cost_base(const ModelParams& p) {
    return p.mu_m / (1.0 - p.mu) * std::log(p.a) + (1.0 - p.mu_m) * std::log(p.p_u_star);
}

// Theta_tilde_0 / K_f; proportional to rho_tilde, so it carries its sign.
double theta_tilde(const HetParams& h) {
    const ModelParams& p = h.base;
    const double rt = rho_tilde(h);
    const double mag = std::exp(std::log(p.sigma) + std::log(p.F) +
                                std::log(labor_factor(p)) +
                                (p.sigma - 1.0) * log_cost_base(p) +
                                std::log(std::pow(h.a_m_max, h.rho) - 1.0) -
                                std::log(h.rho) - std::log(p.mu_m) - std::log(p.D_star) -
                                std::log(p.K_f) - std::log(p.sigma - 1.0));
    return rt * mag;
}

// V(N) = cutoff_productivity(N)^rho, the A6 inner term.
double cutoff_inner(double N, const HetParams& h) {
    const ModelParams& p = h.base;
    const double log_ratio = std::log(p.a) / (1.0 - p.mu) - std::log(p.p_u_star);
    const double e1 = -h.rho * p.mu_m / (h.gamma * (1.0 - p.mu_m));
    const double e2 =
        h.rho * p.mu_m / (h.gamma * (p.sigma - 1.0) * (1.0 - p.mu) * (1.0 - p.mu_m));
    return std::exp(e1 * log_ratio + e2 * std::log(N));
}

double pi_inner(double N, const HetParams& h) {
    const ModelParams& p = h.base;
    const double X = std::pow(N, -p.mu_m / (1.0 - p.mu)) * (N - p.alpha * n_bar(p));
    return theta_tilde(h) * X + 1.0;
}

}  // namespace

double rho_tilde(const HetParams& h) {
    return h.rho - (h.base.sigma - 1.0) * (1.0 + h.gamma * (1.0 - h.base.mu_m));
}

double n_tilde_0(const HetParams& h) {
    const ModelParams& p = h.base;
    return std::exp((p.sigma - 1.0) * (std::log(p.a) - (1.0 - p.mu) * std::log(p.p_u_star)));
}

std::vector<Violation> validate_het(const HetParams& h) {
    std::vector<Violation> out = validate(h.base);
    if (!(h.rho >= 1.0)) out.push_back({"rho-bound", "requires rho >= 1"});
    if (!(h.a_m_max > 1.0)) out.push_back({"a_m_max-bound", "requires a_m_max > 1"});
    if (!(h.gamma > 0.0)) out.push_back({"gamma-bound", "requires gamma > 0"});
    if (h.rho >= 1.0 && h.gamma > 0.0 && rho_tilde(h) == 0.0)
        out.push_back({"rho_tilde-knife-edge", "rho - (sigma-1)[1+gamma(1-mu_m)] must be nonzero"});
    if (!(n_tilde_0(h) > 1.0))
        out.push_back({"n_tilde_0-bound", "requires a^(sigma-1) p_u*^-((sigma-1)(1-mu)) > 1"});
    return out;
}

double pareto_cdf(double a_m, const HetParams& h) {
    if (!(a_m >= 1.0 && a_m <= h.a_m_max))
        throw std::domain_error("pareto_cdf: draw outside [1, a_m_max]");
    return (std::pow(a_m, h.rho) - 1.0) / (std::pow(h.a_m_max, h.rho) - 1.0);
}

double cutoff_productivity(double N, const HetParams& h) {
    if (!(N > 0.0)) throw std::domain_error("cutoff_productivity: N must be positive");
    const ModelParams& p = h.base;
    const double log_ratio = std::log(p.a) / (1.0 - p.mu) - std::log(p.p_u_star);
    const double e1 = -p.mu_m / (h.gamma * (1.0 - p.mu_m));
    const double e2 = p.mu_m / (h.gamma * (p.sigma - 1.0) * (1.0 - p.mu) * (1.0 - p.mu_m));
    return std::exp(e1 * log_ratio + e2 * std::log(N));
}

double cutoff_locus(double N, const HetParams& h) {
    if (!(N > 0.0)) throw std::domain_error("cutoff_locus: N must be positive");
    return h.base.K_f / (std::pow(h.a_m_max, h.rho) - 1.0) * (cutoff_inner(N, h) - 1.0);
}

double pi_zero_locus_het(double N, const HetParams& h) {
    if (!(N > 0.0)) throw std::domain_error("pi_zero_locus_het: N must be positive");
    const double rt = rho_tilde(h);
    if (rt == 0.0) throw std::domain_error("pi_zero_locus_het: rho_tilde is zero");
    const double inner = pi_inner(N, h);
    if (!(inner > 0.0))
        throw std::domain_error("pi_zero_locus_het: inner base is nonpositive");
    return h.base.K_f / (std::pow(h.a_m_max, h.rho) - 1.0) *
           (std::pow(inner, h.rho / rt) - 1.0);
}

HetLoci het_thresholds(const HetParams& h) {
    const ModelParams& p = h.base;
    const double lf = labor_factor(p);
    HetLoci loci;
    loci.N_tilde_0 = n_tilde_0(h);
    loci.F_tilde_b = p.alpha * p.L / (loci.N_tilde_0 * lf);

    const double rt = rho_tilde(h);
    const double tt1 = theta_tilde(h) / p.F;  // F-free locus coefficient
    const double nbar = n_bar(p);
    const double anbar = p.alpha * nbar;

    // Smallest F at which the free-entry curve pokes above the capital curve
    // somewhere between the two intercepts.
    auto f1 = [&](double N) {
        const double W = std::pow(cutoff_inner(N, h), rt / h.rho);
        return p.alpha * p.L / (N * lf) +
               std::pow(N, p.mu_m / (1.0 - p.mu) - 1.0) * (W - 1.0) / tt1;
    };
    double fmin = f1(anbar);
    const int grid = 512;
    for (int i = 1; i <= grid; ++i) {
        const double N = anbar + (nbar - anbar) * i / grid;
        fmin = std::min(fmin, f1(N));
    }
    loci.F_tilde_a = std::max(0.0, fmin);

    const double W_bar = std::pow(cutoff_inner(nbar, h), rt / h.rho);
    const double c = theta_tilde(h) * p.K_f *
                     std::pow(nbar, (1.0 - p.mu - p.mu_m) / (1.0 - p.mu)) * (1.0 - p.alpha);
    loci.K_tilde_f = c / (W_bar - 1.0);

    loci.multiple = p.F > loci.F_tilde_a && p.F <= loci.F_tilde_b && p.K_f > loci.K_tilde_f;
    return loci;
}

ShiftSensitivity shift_sensitivity(const HetParams& h) {
    return shift_sensitivity(h, h.base.alpha * n_bar(h.base));
}

ShiftSensitivity shift_sensitivity(const HetParams& h, double N) {
    const ModelParams& p = h.base;
    const double rt = rho_tilde(h);
    const double tt = theta_tilde(h);
    const double tt1 = tt / p.F;
    const double X = std::pow(N, -p.mu_m / (1.0 - p.mu)) * (N - p.alpha * n_bar(p));
    const double inner = tt * X + 1.0;
    if (!(inner > 0.0)) throw std::domain_error("shift_sensitivity: locus undefined at N");

    const double front = p.K_f / (std::pow(h.a_m_max, h.rho) - 1.0);
    const double outer = h.rho / rt * std::pow(inner, h.rho / rt - 1.0);
    const double dinner_dF = tt1 * std::pow(N, (1.0 - p.mu - p.mu_m) / (1.0 - p.mu));
    ShiftSensitivity s;
    s.dNm_dF = front * outer * dinner_dF;

    // Log-derivative of the shift in mu_m, term by term. rho_tilde, the cost
    // base, the mu_m^-1 factor and both N powers all move with mu_m.
    const double drt = (p.sigma - 1.0) * h.gamma;  // d rho_tilde / d mu_m
    const double logN0t = std::log(n_tilde_0(h));
    const double D0 = drt / rt - 1.0 / p.mu_m + logN0t / (1.0 - p.mu);
    const double D1 = D0 - std::log(N) / (1.0 - p.mu);
    const double dlog =
        -drt / rt                                            // d log(rho/rho_tilde)
        - h.rho * drt / (rt * rt) * std::log(inner)          // exponent shift
        + (h.rho / rt - 1.0) * tt * X * D1 / inner           // inner-base shift
        + D0                                                 // d log Theta_tilde_1
        - std::log(N) / (1.0 - p.mu);                        // N-power shift
    s.d2Nm_dF_dmum = s.dNm_dF * dlog;
    return s;
}

double cutoff_from_mass(double N_m, const HetParams& h) {
    const double raw =
        std::pow(N_m * (std::pow(h.a_m_max, h.rho) - 1.0) / h.base.K_f + 1.0, 1.0 / h.rho);
    return std::clamp(raw, 1.0, h.a_m_max);
}

double het_excess_profit(double N, double N_m, const HetParams& h) {
    if (!(N > 0.0)) throw std::domain_error("het_excess_profit: N must be positive");
    const ModelParams& p = h.base;
    const double rt = rho_tilde(h);
    const double amr = cutoff_from_mass(N_m, h);
    const double integral = h.rho * p.D_star / (std::pow(h.a_m_max, h.rho) - 1.0) *
                            std::exp((1.0 - p.sigma) * log_cost_base(p) +
                                     p.mu_m / (1.0 - p.mu) * std::log(N)) *
                            (std::pow(amr, rt) - 1.0) / rt;
    const double pq = p.sigma / labor_factor(p) *
                      (p.alpha * p.L / N +
                       p.mu_m * (p.sigma - 1.0) / p.sigma * p.K_f / N * integral);
    return pq / p.sigma - p.F;
}

double het_delta_r_marginal(double N, double N_m, const HetParams& h) {
    if (!(N > 0.0)) throw std::domain_error("het_delta_r_marginal: N must be positive");
    const ModelParams& p = h.base;
    const double amr = cutoff_from_mass(N_m, h);
    const double log_inner =
        (1.0 - p.sigma) * (p.mu_m / (1.0 - p.mu) * std::log(p.a) +
                           h.gamma * (1.0 - p.mu_m) * std::log(amr) -
                           p.mu_m * std::log(p.p_u_star)) +
        p.mu_m / (1.0 - p.mu) * std::log(N);
    const double scale =
        p.D_star * std::exp((1.0 - p.sigma) * (std::log(amr) + std::log(p.p_u_star)));
    return scale * (std::exp(log_inner) - 1.0) / p.sigma;
}

std::vector<Equilibrium> het_equilibria(const HetParams& h) {
    const ModelParams& p = h.base;
    const double nbar = n_bar(p);
    const double anbar = p.alpha * nbar;
    std::vector<Equilibrium> eqs;

    const double nm_top = std::clamp(cutoff_locus(nbar, h), 0.0, p.K_f);
    eqs.push_back({State{nbar, nm_top, 0.0}, EqLabel::S1, true});

    // Crossings of the two curves sit between the free-entry intercept and the
    // labor bound; the lower one is the few-firm equilibrium, the upper the saddle.
    auto gap = [&](double N) { return pi_zero_locus_het(N, h) - cutoff_locus(N, h); };
    const int grid = 256;
    double prevN = anbar * (1.0 + 1e-12);
    double prevG;
    try {
        prevG = gap(prevN);
    } catch (const std::domain_error&) {
        prevG = -1.0;
    }
    std::vector<double> roots;
    for (int i = 1; i <= grid; ++i) {
        const double N = anbar + (nbar - anbar) * i / grid;
        double g;
        try {
            g = gap(N);
        } catch (const std::domain_error&) {
            prevN = N;
            continue;
        }
        if ((prevG < 0.0) != (g < 0.0)) {
            double lo = prevN, hi = N;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                if ((gap(mid) < 0.0) == (prevG < 0.0))
                    lo = mid;
                else
                    hi = mid;
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prevN = N;
        prevG = g;
    }
    if (!roots.empty()) {
        const double n_s2 = roots.front();
        eqs.push_back({State{n_s2, cutoff_locus(n_s2, h), 0.0}, EqLabel::S2, true});
        if (roots.size() > 1) {
            const double n_u = roots.back();
            eqs.push_back({State{n_u, cutoff_locus(n_u, h), 0.0}, EqLabel::U, false});
        }
    }
    return eqs;
}

Trajectory integrate_het(const State& initial, const HetParams& h,
                         const IntegrationOptions& opts) {
    const ModelParams& p = h.base;
    FlowField flow;
    flow.dN = [h](double N, double Nm) { return het_excess_profit(N, Nm, h); };
    const double speed = opts.speed_ratio;
    flow.dNm = [h, speed](double N, double Nm) {
        return speed * het_delta_r_marginal(N, Nm, h);
    };
    flow.N_max = n_bar(p);
    flow.N_min = opts.n_floor_rel * flow.N_max;
    flow.Nm_min = 0.0;
    flow.Nm_max = p.K_f;

    std::vector<Equilibrium> targets;
    for (const auto& e : het_equilibria(h))
        if (e.stable) targets.push_back(e);
    return integrate_flow(flow, initial, targets, opts);
}

}  // namespace linkage
