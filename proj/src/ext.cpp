#include "linkage/ext.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace linkage {

namespace {

double labor_factor(const ModelParams& p) { return p.sigma * (1.0 - p.mu) + p.mu; }

// [a_m a^(mu_m/(1-mu)) (tau p_u*)^(1-mu_m)]^(1-sigma) N^(mu_m/(1-mu)) for an
// arbitrary local cost share.
double p_m_pow_share(double N, const ModelParams& p, double share) {
    const double log_cost = std::log(p.a_m) + share / (1.0 - p.mu) * std::log(p.a) +
                            (1.0 - share) * (std::log(p.tau) + std::log(p.p_u_star));
    return std::exp((1.0 - p.sigma) * log_cost + share / (1.0 - p.mu) * std::log(N));
}

double r_f_flow(const ModelParams& p) {
    return p.D_star / p.sigma *
           std::exp((1.0 - p.sigma) * (std::log(p.a_m) + std::log(p.p_u_star)));
}

}  // namespace

const char* to_string(HostConfig config) {
    switch (config) {
        case HostConfig::TwoStable: return "two-stable";
        case HostConfig::UniqueStable: return "unique-stable";
        case HostConfig::Degenerate: return "degenerate";
    }
    return "?";
}

std::vector<Violation> validate_host_market(const HostMarketParams& hm) {
    const ModelParams& p = hm.base;
    std::vector<Violation> out = validate(p);
    // The baseline slope and capital conditions are superseded here.
    std::erase_if(out, [](const Violation& v) {
        return v.assumption == "slope-condition" || v.assumption == "capital-abundance";
    });
    if (!(p.mu + p.mu_m < 1.0))
        out.push_back({"host-slope-condition", "requires mu + mu_m < 1"});
    if (out.empty()) {
        const double nbar = n_bar(p);
        const double cap = theta(p) *
                           std::pow(nbar, (1.0 - p.mu - p.mu_m) / (1.0 - p.mu)) *
                           (1.0 - p.alpha * p.mu_m * (p.sigma - 1.0) / p.sigma);
        if (!(p.K_f > cap))
            out.push_back({"host-capital-abundance",
                           "free-entry locus must stay below K_f at the labor bound"});
    }
    return out;
}

double host_pi_zero_locus(double N, const HostMarketParams& hm) {
    if (!(N > 0.0)) throw std::domain_error("host_pi_zero_locus: N must be positive");
    const ModelParams& p = hm.base;
    const double root = p.alpha * p.mu_m * (p.sigma - 1.0) * n_bar(p) / p.sigma;
    return theta(p) * std::pow(N, -p.mu_m / (1.0 - p.mu)) * (N - root);
}

std::optional<double> host_delta_r_locus(double N, const HostMarketParams& hm) {
    if (!(N > 0.0)) throw std::domain_error("host_delta_r_locus: N must be positive");
    const ModelParams& p = hm.base;
    const double g = p_m_pow_share(N, p, p.mu_m) /
                     std::exp((1.0 - p.sigma) * (std::log(p.a_m) + std::log(p.p_u_star)));
    if (g >= 1.0 - 1e-12) return std::nullopt;  // at/right of the arbitrage threshold
    const double numer =
        p.alpha * p.L * std::exp((p.sigma - 1.0) * (std::log(p.a_m) + std::log(p.p_u_star)));
    return numer / (p.D_star * (1.0 - g));
}

double host_excess_profit(double N, double N_m, const HostMarketParams& hm) {
    if (!(N > 0.0)) throw std::domain_error("host_excess_profit: N must be positive");
    const ModelParams& p = hm.base;
    const double pq = p.sigma / labor_factor(p) * p.mu_m * (p.sigma - 1.0) / p.sigma *
                      (p.alpha * p.L + N_m * p_m_pow_share(N, p, p.mu_m) * p.D_star) / N;
    return pq / p.sigma - p.F;
}

double host_delta_r(double N, double N_m, const HostMarketParams& hm) {
    if (!(N > 0.0)) throw std::domain_error("host_delta_r: N must be positive");
    const ModelParams& p = hm.base;
    const double base_diff =
        (p_m_pow_share(N, p, p.mu_m) -
         std::exp((1.0 - p.sigma) * (std::log(p.a_m) + std::log(p.p_u_star)))) *
        p.D_star / p.sigma;
    if (N_m <= 0.0) return std::numeric_limits<double>::infinity();
    return base_diff + p.alpha * p.L / (p.sigma * N_m);
}

bool host_n_dot_positive(double N, double N_m, const HostMarketParams& hm) {
    return host_excess_profit(N, N_m, hm) > 0.0;
}

bool host_nm_dot_positive(double N, double N_m, const HostMarketParams& hm) {
    return host_delta_r(N, N_m, hm) > 0.0;
}

HostEquilibria host_market_equilibria(const HostMarketParams& hm) {
    const ModelParams& p = hm.base;
    const double nbar = n_bar(p);
    const double n0 = n_zero(p);
    HostEquilibria result;

    // Interior equilibria are crossings of the two loci left of the arbitrage
    // threshold; the capital curve has a vertical asymptote there, so bracket
    // carefully before refining.
    const double lo = 1e-6 * nbar;
    const double hi = std::min(nbar, n0 * (1.0 - 1e-9));
    auto gap = [&](double N) {
        const auto dr = host_delta_r_locus(N, hm);
        return *dr - host_pi_zero_locus(N, hm);
    };
    std::vector<double> roots;
    bool near_tangent = false;
    if (hi > lo) {
        const int panels = 64;
        double x0 = lo, g0 = gap(x0);
        double closest = std::abs(g0);
        for (int i = 1; i <= panels; ++i) {
            const double x1 = lo + (hi - lo) * i / panels;
            const double g1 = gap(x1);
            closest = std::min(closest, std::abs(g1));
            if ((g0 < 0.0) != (g1 < 0.0)) {
                double a = x0, b = x1, ga = g0;
                for (int it = 0; it < 200 && b - a > 1e-14 * nbar; ++it) {
                    const double mid = 0.5 * (a + b);
                    const double gm = gap(mid);
                    if ((gm < 0.0) == (ga < 0.0)) {
                        a = mid;
                        ga = gm;
                    } else {
                        b = mid;
                    }
                }
                roots.push_back(0.5 * (a + b));
            }
            x0 = x1;
            g0 = g1;
        }
        const double kf_scale = p.K_f;
        if (roots.empty() && closest < 1e-6 * kf_scale) near_tangent = true;
    }

    for (double n_star : roots) {
        const double nm_star = *host_delta_r_locus(n_star, hm);
        // Flow Jacobian by central differences.
        const double hn = 1e-7 * nbar, hm_ = std::max(1e-7 * p.K_f, 1e-10);
        const double j11 = (host_excess_profit(n_star + hn, nm_star, hm) -
                            host_excess_profit(n_star - hn, nm_star, hm)) /
                           (2.0 * hn);
        const double j12 = (host_excess_profit(n_star, nm_star + hm_, hm) -
                            host_excess_profit(n_star, nm_star - hm_, hm)) /
                           (2.0 * hm_);
        const double j21 =
            (host_delta_r(n_star + hn, nm_star, hm) - host_delta_r(n_star - hn, nm_star, hm)) /
            (2.0 * hn);
        const double j22 =
            (host_delta_r(n_star, nm_star + hm_, hm) - host_delta_r(n_star, nm_star - hm_, hm)) /
            (2.0 * hm_);
        const double tr = j11 + j22;
        const double det = j11 * j22 - j12 * j21;
        const bool stable = det > 0.0 && tr < 0.0;
        result.equilibria.push_back(
            {State{n_star, nm_star, 0.0}, stable ? EqLabel::S1 : EqLabel::U, stable});
    }

    // High configuration at the labor bound: all capital when the return
    // differential still favors entry there, otherwise the mass at which the
    // marginal unit is indifferent.
    if (host_excess_profit(nbar, p.K_f, hm) >= 0.0 && host_delta_r(nbar, p.K_f, hm) >= 0.0) {
        result.equilibria.push_back({State{nbar, p.K_f, 0.0}, EqLabel::S2, true});
    } else if (const auto wall = host_delta_r_locus(nbar, hm);
               wall && *wall > 0.0 && *wall < p.K_f &&
               host_excess_profit(nbar, *wall, hm) >= 0.0) {
        result.equilibria.push_back({State{nbar, *wall, 0.0}, EqLabel::S2, true});
    }

    int stable_count = 0;
    for (const auto& e : result.equilibria) stable_count += e.stable ? 1 : 0;
    if (near_tangent)
        result.config = HostConfig::Degenerate;
    else if (stable_count >= 2)
        result.config = HostConfig::TwoStable;
    else
        result.config = HostConfig::UniqueStable;
    return result;
}

std::vector<Violation> validate_sourcing(const SourcingParams& sp) {
    std::vector<Violation> out = validate(sp.base);
    std::erase_if(out, [](const Violation& v) {
        return v.assumption == "slope-condition" || v.assumption == "capital-abundance";
    });
    if (!(sp.mu_m_H > 0.0 && sp.mu_m_H < 1.0 && sp.mu_m_L > 0.0 && sp.mu_m_L < 1.0))
        out.push_back({"share-bounds", "cost shares must lie in (0,1)"});
    else if (!(sp.mu_m_H > sp.mu_m_L))
        out.push_back({"share-ordering", "requires mu_m_H > mu_m_L"});
    if (!(sp.F_H > sp.F_L && sp.F_L > 1.0))
        out.push_back({"capital-ordering", "requires F_H > F_L > 1"});
    if (!(sp.base.alpha > 1.0 - (1.0 - sp.base.mu) / sp.mu_m_H))
        out.push_back({"slope-condition", "requires alpha > 1 - (1-mu)/mu_m_H"});
    return out;
}

namespace {

double log_n_zero_type(const SourcingParams& sp, double share, double fixed_capital) {
    const ModelParams& p = sp.base;
    return (p.sigma - 1.0) * std::log(p.a) +
           (p.sigma - 1.0) * (1.0 - p.mu) *
               ((1.0 - share) / share * std::log(p.tau) - std::log(p.p_u_star)) +
           (1.0 - p.mu) / share * std::log(fixed_capital);
}

}  // namespace

SourcingThresholds sourcing_thresholds(const SourcingParams& sp) {
    const auto violations = validate_sourcing(sp);
    if (!violations.empty())
        throw std::domain_error("sourcing_thresholds: " + violations.front().assumption);
    const ModelParams& p = sp.base;
    SourcingThresholds t;
    t.N_0 = std::exp(log_n_zero_type(sp, sp.mu_m_L, sp.F_L));
    t.N_2 = std::exp(log_n_zero_type(sp, sp.mu_m_H, sp.F_H));
    t.N_1 = std::exp((p.sigma - 1.0) * std::log(p.a) +
                     (1.0 - p.sigma) * (1.0 - p.mu) * (std::log(p.tau) + std::log(p.p_u_star)) +
                     (1.0 - p.mu) / (sp.mu_m_H - sp.mu_m_L) * std::log(sp.F_H / sp.F_L));
    if (!(t.N_1 > t.N_2 && t.N_2 > t.N_0))
        throw std::domain_error("sourcing_thresholds: ordering N_1 > N_2 > N_0 fails");
    const double lf = labor_factor(p);
    t.F_b = p.L / (t.N_0 * lf);
    t.F_c = p.L / (t.N_1 * lf);
    return t;
}

double sourcing_r_m(double N, const SourcingParams& sp, MneType type) {
    if (!(N > 0.0)) throw std::domain_error("sourcing_r_m: N must be positive");
    const ModelParams& p = sp.base;
    const double share = type == MneType::H ? sp.mu_m_H : sp.mu_m_L;
    const double fixed = type == MneType::H ? sp.F_H : sp.F_L;
    return p_m_pow_share(N, p, share) * p.D_star / (p.sigma * fixed);
}

double sourcing_r_f(const SourcingParams& sp) { return r_f_flow(sp.base); }

double sourcing_pi_zero_locus(double N, const SourcingParams& sp, MneType forced) {
    if (!(N > 0.0)) throw std::domain_error("sourcing_pi_zero_locus: N must be positive");
    const ModelParams& p = sp.base;
    const double share = forced == MneType::H ? sp.mu_m_H : sp.mu_m_L;
    const double log_cost = std::log(p.a_m) + share / (1.0 - p.mu) * std::log(p.a) +
                            (1.0 - share) * (std::log(p.tau) + std::log(p.p_u_star));
    const double theta_j = std::exp(std::log(p.sigma) + std::log(p.F) +
                                    std::log(labor_factor(p)) + (p.sigma - 1.0) * log_cost -
                                    std::log(share) - std::log(p.D_star) -
                                    std::log(p.sigma - 1.0));
    return theta_j * std::pow(N, -share / (1.0 - p.mu)) * (N - p.alpha * n_bar(p));
}

double sourcing_pi_zero_locus(double N, const SourcingParams& sp) {
    const SourcingThresholds t = sourcing_thresholds(sp);
    return sourcing_pi_zero_locus(N, sp, N <= t.N_1 ? MneType::L : MneType::H);
}

const char* to_string(SourcingVerdict verdict) {
    switch (verdict) {
        case SourcingVerdict::RemainH: return "remain-H";
        case SourcingVerdict::SwitchToL: return "switch-to-L";
        case SourcingVerdict::Exit: return "exit";
    }
    return "?";
}

SourcingOutcome sourcing_shock(const SourcingParams& sp, double F_prime) {
    if (!(F_prime >= sp.base.F))
        throw std::domain_error("sourcing_shock: requires F' >= F");
    const SourcingThresholds t = sourcing_thresholds(sp);
    const ModelParams& p = sp.base;
    const double nbar = n_bar(p);
    if (!(nbar > t.N_1))
        throw std::domain_error("sourcing_shock: pre-shock point requires Nbar > N_1");

    const double lf = labor_factor(p);
    const double nbar_post = p.L / (F_prime * lf);
    SourcingOutcome out;
    out.threshold_low = t.F_c;
    out.threshold_high = t.F_b;
    if (nbar_post >= t.N_1) {
        out.verdict = SourcingVerdict::RemainH;
        out.new_N = nbar_post;
        out.new_N_m = p.K_f / sp.F_H;
    } else if (nbar_post > t.N_0) {
        out.verdict = SourcingVerdict::SwitchToL;
        out.new_N = nbar_post;
        out.new_N_m = p.K_f / sp.F_L;
    } else {
        out.verdict = SourcingVerdict::Exit;
        out.new_N = p.alpha * nbar_post;
        out.new_N_m = 0.0;
    }
    return out;
}

}  // namespace linkage
