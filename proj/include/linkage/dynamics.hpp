#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "linkage/core.hpp"
#include "linkage/params.hpp"

namespace linkage {

enum class EqLabel { S1, S2, U };

const char* to_string(EqLabel label);

/// A located fixed point of the adjustment system.
struct Equilibrium {
    State location;
    EqLabel label;
    bool stable;
};

struct IntegrationOptions {
    double dt = 0.0;            ///< step size; <= 0 picks default_dt(params)
    double horizon = 2000.0;    ///< maximum model time
    double n_floor_rel = 1e-6;  ///< N floor as a fraction of Nbar (price index blows up at N=0)
    double speed_ratio = 1.0;   ///< d N_m/dt = speed_ratio * delta_r
    double rate_tol = 1e-9;     ///< convergence: post-projection rate sup-norm below this...
    int settle_steps = 10;      ///< ...for this many consecutive steps
    bool rk4 = false;           ///< fixed-step 4th-order update instead of Euler
    int record_every = 1;       ///< trajectory thinning; 0 records only endpoints
};

/// Law-of-motion time stepper state after one explicit step projected onto
/// the box [N_floor, Nbar] x [0, K_f].
State step(const State& s, const ModelParams& p, double dt, const IntegrationOptions& opts = {});

/// dt heuristic: 0.01 * min(1, F / |Pi(alpha*Nbar + floor, 0)|).
double default_dt(const ModelParams& p);

struct Trajectory {
    std::vector<State> points;
    std::optional<EqLabel> terminal;  ///< empty means the horizon was reached
    bool converged = false;
};

struct IntegrationError : std::runtime_error {
    explicit IntegrationError(const State& last);
    State last_good;
};

/// Integrates the adjustment dynamics from `initial` (projected into the box
/// first) until convergence or the horizon. The terminal label is the nearest
/// equilibrium of find_equilibria(p) within 1e-4 relative distance.
Trajectory integrate(const State& initial, const ModelParams& p,
                     const IntegrationOptions& opts = {});

/// Equilibria of the current regime: {S1} if F < F_a, {S2} if F > F_b,
/// {S1, S2, U} for F in [F_a, F_b]. S1 and S2 are stable, U is a saddle.
std::vector<Equilibrium> find_equilibria(const ModelParams& p);

enum class CellLabel : std::uint8_t { Unresolved = 0, S1 = 1, S2 = 2 };

const char* to_string(CellLabel label);

/// Terminal labels over a resolution x resolution lattice of cell centers on
/// (0, Nbar] x [0, K_f], stored row-major with N_m as the row axis.
struct BasinMap {
    int resolution = 0;
    std::vector<CellLabel> cells;  ///< row-major: index = row * resolution + col
    std::vector<double> n_centers;
    std::vector<double> nm_centers;

    CellLabel at(int row, int col) const { return cells[std::size_t(row) * resolution + col]; }
};

/// Cell-by-cell basin computation; cells are independent and evaluated in
/// parallel when OpenMP is enabled (threads = 0 keeps the runtime default).
/// Results are identical to basin_map_serial regardless of thread count.
BasinMap basin_map(const ModelParams& p, int resolution, const IntegrationOptions& opts = {},
                   int threads = 0);

/// Serial reference implementation kept for testing and benchmarking.
BasinMap basin_map_serial(const ModelParams& p, int resolution,
                          const IntegrationOptions& opts = {});

/// Generic flow for the model extensions that reuse the same projected-Euler
/// machinery with different loci.
struct FlowField {
    std::function<double(double, double)> dN;
    std::function<double(double, double)> dNm;
    double N_min, N_max, Nm_min, Nm_max;
};

Trajectory integrate_flow(const FlowField& flow, const State& initial,
                          const std::vector<Equilibrium>& targets,
                          const IntegrationOptions& opts);

}  // namespace linkage
