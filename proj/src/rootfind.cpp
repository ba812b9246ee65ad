#include "linkage/rootfind.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace linkage {

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol,
              int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0))
        throw std::invalid_argument("bisect: interval does not bracket a root");
    for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if ((fmid < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> scan_roots(const std::function<double(double)>& f, double lo, double hi,
                               int subdivisions, double tol) {
    std::vector<double> roots;
    double x0 = lo;
    double f0 = f(x0);
    for (int i = 1; i <= subdivisions; ++i) {
        const double x1 = lo + (hi - lo) * i / subdivisions;
        const double f1 = f(x1);
        if (f0 == 0.0) {
            roots.push_back(x0);
        } else if (std::isfinite(f0) && std::isfinite(f1) && (f0 < 0.0) != (f1 < 0.0)) {
            roots.push_back(bisect(f, x0, x1, tol));
        }
        x0 = x1;
        f0 = f1;
    }
    if (f0 == 0.0) roots.push_back(x0);
    return roots;
}

double grid_argmax(const std::function<double(double)>& f, double lo, double hi, int cells) {
    double best_x = lo;
    double best_v = f(lo);
    for (int i = 1; i <= cells; ++i) {
        const double x = i == cells ? hi : lo + (hi - lo) * i / cells;
        const double v = f(x);
        if (v > best_v) {
            best_v = v;
            best_x = x;
        }
    }
    return best_x;
}

}  // namespace linkage
