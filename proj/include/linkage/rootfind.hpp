#pragma once

#include <functional>
#include <optional>

namespace linkage {

/// Bisection on a bracketing interval [lo, hi] with f(lo) and f(hi) of opposite
/// sign. Returns the midpoint once the interval is below tol (absolute on x).
/// Throws std::invalid_argument if the interval does not bracket a sign change.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol = 1e-12, int max_iter = 200);

/// Scans [lo, hi] with `subdivisions` equal panels and bisects every panel whose
/// endpoints bracket a sign change. Roots are returned in increasing order.
std::vector<double> scan_roots(const std::function<double(double)>& f, double lo, double hi,
                               int subdivisions, double tol = 1e-12);

/// Argmax of f over a uniform grid of `cells`+1 points on [lo, hi].
double grid_argmax(const std::function<double(double)>& f, double lo, double hi, int cells);

}  // namespace linkage
