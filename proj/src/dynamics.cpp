#include "linkage/dynamics.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace linkage {

const char* to_string(EqLabel label) {
    switch (label) {
        case EqLabel::S1: return "S1";
        case EqLabel::S2: return "S2";
        case EqLabel::U: return "U";
    }
    return "?";
}

const char* to_string(CellLabel label) {
    switch (label) {
        case CellLabel::S1: return "S1";
        case CellLabel::S2: return "S2";
        case CellLabel::Unresolved: return "unresolved";
    }
    return "?";
}

IntegrationError::IntegrationError(const State& last)
    : std::runtime_error("non-finite state during integration"), last_good(last) {}

namespace {

// Flow field of the baseline model with every model constant folded in, so a
// step costs a single pow.
struct CoreFlow {
    double inv_lf;       // 1 / (sigma(1-mu)+mu)
    double alpha_L;      // alpha * L
    double mne_coef;     // mu_m (sigma-1)/sigma * p_m^(1-sigma) prefactor * D*
    double m_exp;        // mu_m / (1-mu)
    double dr_scale;     // D* (a_m p_u*)^(1-sigma) / sigma
    double dr_inner;     // [a^(mu_m/(1-mu)) tau^(1-mu_m) p_u*^(-mu_m)]^(1-sigma)
    double F;
    double speed_ratio;
    double N_min, N_max, Nm_min, Nm_max;

    static CoreFlow make(const ModelParams& p, const IntegrationOptions& opts) {
        CoreFlow f;
        const double lf = p.sigma * (1.0 - p.mu) + p.mu;
        f.inv_lf = 1.0 / lf;
        f.alpha_L = p.alpha * p.L;
        const double log_cost = std::log(p.a_m) + p.mu_m / (1.0 - p.mu) * std::log(p.a) +
                                (1.0 - p.mu_m) * (std::log(p.tau) + std::log(p.p_u_star));
        f.mne_coef = p.mu_m * (p.sigma - 1.0) / p.sigma *
                     std::exp((1.0 - p.sigma) * log_cost) * p.D_star;
        f.m_exp = p.mu_m / (1.0 - p.mu);
        f.dr_scale = p.D_star *
                     std::exp((1.0 - p.sigma) * (std::log(p.a_m) + std::log(p.p_u_star))) /
                     p.sigma;
        f.dr_inner = std::exp((1.0 - p.sigma) *
                              (p.mu_m / (1.0 - p.mu) * std::log(p.a) +
                               (1.0 - p.mu_m) * std::log(p.tau) -
                               p.mu_m * std::log(p.p_u_star)));
        f.F = p.F;
        f.speed_ratio = opts.speed_ratio;
        f.N_max = n_bar(p);
        f.N_min = opts.n_floor_rel * f.N_max;
        f.Nm_min = 0.0;
        f.Nm_max = p.K_f;
        return f;
    }

    void rates(double N, double Nm, double& dN, double& dNm) const {
        double n_pow;
        rates(N, Nm, dN, dNm, n_pow);
    }

    void rates(double N, double Nm, double& dN, double& dNm, double& n_pow) const {
        n_pow = std::pow(N, m_exp);
        dN = inv_lf * (alpha_L + mne_coef * Nm * n_pow) / N - F;
        dNm = speed_ratio * dr_scale * (dr_inner * n_pow - 1.0);
    }
};

struct FnFlow {
    const FlowField& f;
    double N_min, N_max, Nm_min, Nm_max;
    void rates(double N, double Nm, double& dN, double& dNm) const {
        dN = f.dN(N, Nm);
        dNm = f.dNm(N, Nm);
    }
};

template <class Flow>
inline void clamp_into(const Flow& f, double& N, double& Nm) {
    N = std::clamp(N, f.N_min, f.N_max);
    Nm = std::clamp(Nm, f.Nm_min, f.Nm_max);
}

template <class Flow>
inline void advance(const Flow& f, double& N, double& Nm, double dt, bool rk4) {
    double dN, dNm;
    if (!rk4) {
        f.rates(N, Nm, dN, dNm);
        N += dt * dN;
        Nm += dt * dNm;
    } else {
        double k2N, k2M, k3N, k3M, k4N, k4M;
        f.rates(N, Nm, dN, dNm);
        double xN = std::clamp(N + 0.5 * dt * dN, f.N_min, f.N_max);
        double xM = std::clamp(Nm + 0.5 * dt * dNm, f.Nm_min, f.Nm_max);
        f.rates(xN, xM, k2N, k2M);
        xN = std::clamp(N + 0.5 * dt * k2N, f.N_min, f.N_max);
        xM = std::clamp(Nm + 0.5 * dt * k2M, f.Nm_min, f.Nm_max);
        f.rates(xN, xM, k3N, k3M);
        xN = std::clamp(N + dt * k3N, f.N_min, f.N_max);
        xM = std::clamp(Nm + dt * k3M, f.Nm_min, f.Nm_max);
        f.rates(xN, xM, k4N, k4M);
        N += dt / 6.0 * (dN + 2.0 * k2N + 2.0 * k3N + k4N);
        Nm += dt / 6.0 * (dNm + 2.0 * k2M + 2.0 * k3M + k4M);
    }
    clamp_into(f, N, Nm);
}

std::optional<EqLabel> nearest_label(double N, double Nm, const std::vector<Equilibrium>& eqs,
                                     double n_scale, double nm_scale, double tol) {
    for (const auto& e : eqs) {
        const double dn = std::abs(N - e.location.N) / n_scale;
        const double dm = std::abs(Nm - e.location.N_m) / nm_scale;
        if (std::max(dn, dm) < tol) return e.label;
    }
    return std::nullopt;
}

template <class Flow>
Trajectory run_integration(const Flow& flow, const State& initial,
                           const std::vector<Equilibrium>& targets,
                           const IntegrationOptions& opts, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
    if (!(opts.horizon > dt)) throw std::invalid_argument("integrate: horizon must exceed dt");

    Trajectory traj;
    double N = initial.N, Nm = initial.N_m;
    clamp_into(flow, N, Nm);
    double t = 0.0;
    traj.points.push_back({N, Nm, t});

    const double n_scale = flow.N_max;
    const double nm_scale = flow.Nm_max > 0.0 ? flow.Nm_max : 1.0;
    int settled = 0;
    long step_index = 0;
    const long max_steps = static_cast<long>(std::ceil(opts.horizon / dt));
    while (step_index < max_steps) {
        const double prevN = N, prevNm = Nm;
        advance(flow, N, Nm, dt, opts.rk4);
        t += dt;
        ++step_index;
        if (!std::isfinite(N) || !std::isfinite(Nm))
            throw IntegrationError(State{prevN, prevNm, t - dt});
        if (opts.record_every > 0 && step_index % opts.record_every == 0)
            traj.points.push_back({N, Nm, t});
        const double rate = std::max(std::abs(N - prevN), std::abs(Nm - prevNm)) / dt;
        settled = rate < opts.rate_tol ? settled + 1 : 0;
        if (settled >= opts.settle_steps) {
            traj.converged = true;
            break;
        }
    }
    if (traj.points.back().t != t) traj.points.push_back({N, Nm, t});
    if (traj.converged)
        traj.terminal = nearest_label(N, Nm, targets, n_scale, nm_scale, 1e-4);
    return traj;
}

}  // namespace

double default_dt(const ModelParams& p) {
    const double nbar = n_bar(p);
    const double probe = excess_profit(p.alpha * nbar + 1e-6 * nbar, 0.0, p);
    const double scale = std::abs(probe) > 0.0 ? p.F / std::abs(probe) : 1.0;
    return 0.01 * std::min(1.0, scale);
}

State step(const State& s, const ModelParams& p, double dt, const IntegrationOptions& opts) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    const CoreFlow flow = CoreFlow::make(p, opts);
    double N = s.N, Nm = s.N_m;
    advance(flow, N, Nm, dt, opts.rk4);
    return State{N, Nm, s.t + dt};
}

std::vector<Equilibrium> find_equilibria(const ModelParams& p) {
    const DerivedConstants d = derive(p);
    std::vector<Equilibrium> eqs;
    const Equilibrium s1{State{d.N_bar, p.K_f, 0.0}, EqLabel::S1, true};
    const Equilibrium s2{State{p.alpha * d.N_bar, 0.0, 0.0}, EqLabel::S2, true};
    if (p.F < d.F_a) {
        eqs.push_back(s1);
    } else if (p.F > d.F_b) {
        eqs.push_back(s2);
    } else {
        eqs.push_back(s1);
        eqs.push_back(s2);
        eqs.push_back({State{d.N_0, pi_zero_locus(d.N_0, p), 0.0}, EqLabel::U, false});
    }
    return eqs;
}

Trajectory integrate(const State& initial, const ModelParams& p,
                     const IntegrationOptions& opts) {
    const CoreFlow flow = CoreFlow::make(p, opts);
    const double dt = opts.dt > 0.0 ? opts.dt : default_dt(p);
    return run_integration(flow, initial, find_equilibria(p), opts, dt);
}

Trajectory integrate_flow(const FlowField& flow, const State& initial,
                          const std::vector<Equilibrium>& targets,
                          const IntegrationOptions& opts) {
    FnFlow f{flow, flow.N_min, flow.N_max, flow.Nm_min, flow.Nm_max};
    const double dt = opts.dt > 0.0 ? opts.dt : 0.01;
    return run_integration(f, initial, targets, opts, dt);
}

namespace {

struct BasinContext {
    CoreFlow flow;
    double dt;
    long max_steps;
    double rate_tol;
    int settle_steps;
    double N_0;
    double nbar;
    double alpha_nbar;
    double theta;
    bool s1_certifiable;  // {N >= N_0, N_m >= locus(N)} is forward-invariant and drains to S1
    bool s2_certifiable;  // {N <= N_0, N_m <= locus(N)} likewise drains to S2
    std::vector<Equilibrium> eqs;
};

// Early classification: on either side of the arbitrage threshold the flow
// cannot re-cross the free-entry locus outward (on the locus N is stationary
// while Delta r_m keeps pushing N_m off it), so membership decides the cell.
CellLabel classify_cell(double N, double Nm, const BasinContext& ctx) {
    const CoreFlow& f = ctx.flow;
    clamp_into(f, N, Nm);
    int settled = 0;
    for (long i = 0; i < ctx.max_steps; ++i) {
        double dN, dNm, n_pow;
        f.rates(N, Nm, dN, dNm, n_pow);
        const double locus_term = ctx.theta * (N - ctx.alpha_nbar);  // locus(N) * N^m
        const double mass_term = Nm * n_pow;
        if (ctx.s2_certifiable && N <= ctx.N_0 &&
            (Nm <= f.Nm_min || mass_term <= locus_term))
            return CellLabel::S2;
        if (ctx.s1_certifiable && N >= ctx.N_0 &&
            (Nm >= f.Nm_max || mass_term >= locus_term))
            return CellLabel::S1;
        const double prevN = N, prevNm = Nm;
        N = std::clamp(N + ctx.dt * dN, f.N_min, f.N_max);
        Nm = std::clamp(Nm + ctx.dt * dNm, f.Nm_min, f.Nm_max);
        const double rate = std::max(std::abs(N - prevN), std::abs(Nm - prevNm)) / ctx.dt;
        settled = rate < ctx.rate_tol ? settled + 1 : 0;
        if (settled >= ctx.settle_steps) {
            const auto label = nearest_label(N, Nm, ctx.eqs, ctx.nbar, f.Nm_max, 1e-4);
            if (!label) return CellLabel::Unresolved;
            switch (*label) {
                case EqLabel::S1: return CellLabel::S1;
                case EqLabel::S2: return CellLabel::S2;
                case EqLabel::U: return CellLabel::Unresolved;
            }
        }
    }
    return CellLabel::Unresolved;
}

BasinMap run_basin(const ModelParams& p, int resolution, const IntegrationOptions& opts,
                   bool parallel, int threads) {
    if (resolution < 1) throw std::invalid_argument("basin_map: resolution must be >= 1");
    BasinContext ctx;
    ctx.flow = CoreFlow::make(p, opts);
    ctx.dt = opts.dt > 0.0 ? opts.dt : default_dt(p);
    ctx.max_steps = static_cast<long>(std::ceil(opts.horizon / ctx.dt));
    ctx.rate_tol = opts.rate_tol;
    ctx.settle_steps = opts.settle_steps;
    ctx.N_0 = n_zero(p);
    ctx.nbar = n_bar(p);
    ctx.alpha_nbar = p.alpha * ctx.nbar;
    ctx.theta = theta(p);
    ctx.eqs = find_equilibria(p);
    ctx.s2_certifiable = ctx.alpha_nbar <= ctx.N_0;
    ctx.s1_certifiable = ctx.nbar >= ctx.N_0 && p.K_f > pi_zero_locus(ctx.nbar, p);

    BasinMap map;
    map.resolution = resolution;
    map.cells.assign(std::size_t(resolution) * resolution, CellLabel::Unresolved);
    map.n_centers.resize(resolution);
    map.nm_centers.resize(resolution);
    for (int i = 0; i < resolution; ++i) {
        map.n_centers[i] = ctx.nbar * (i + 0.5) / resolution;
        map.nm_centers[i] = p.K_f * (i + 0.5) / resolution;
    }

    const long total = static_cast<long>(resolution) * resolution;
#ifdef _OPENMP
    if (parallel) {
        if (threads > 0) omp_set_num_threads(threads);
#pragma omp parallel for schedule(dynamic, 64)
        for (long idx = 0; idx < total; ++idx) {
            const int row = static_cast<int>(idx / resolution);
            const int col = static_cast<int>(idx % resolution);
            map.cells[idx] = classify_cell(map.n_centers[col], map.nm_centers[row], ctx);
        }
        return map;
    }
#else
    (void)parallel;
    (void)threads;
#endif
    for (long idx = 0; idx < total; ++idx) {
        const int row = static_cast<int>(idx / resolution);
        const int col = static_cast<int>(idx % resolution);
        map.cells[idx] = classify_cell(map.n_centers[col], map.nm_centers[row], ctx);
    }
    return map;
}

}  // namespace

BasinMap basin_map(const ModelParams& p, int resolution, const IntegrationOptions& opts,
                   int threads) {
    return run_basin(p, resolution, opts, true, threads);
}

BasinMap basin_map_serial(const ModelParams& p, int resolution, const IntegrationOptions& opts) {
    return run_basin(p, resolution, opts, false, 0);
}

}  // namespace linkage
