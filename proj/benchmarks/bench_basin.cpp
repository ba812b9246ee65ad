// Compares the serial reference basin kernel against the OpenMP one and
// checks that their labels agree cell for cell.

#include <chrono>
#include <cstdio>

#include "linkage/dynamics.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

linkage::ModelParams bench_params() {
    linkage::ModelParams p;
    p.sigma = 4.0;
    p.mu = 0.5;
    p.mu_m = 0.5;
    p.alpha = 0.7;
    p.a = 1.0;
    p.a_m = 1.0;
    p.p_u_star = 1.0;
    p.tau = 1.44;
    p.L = 100.0;
    p.F = 20.0;
    p.K_f = 10.0;
    p.D_star = 10.0;
    return p;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    const int resolution = argc > 1 ? std::atoi(argv[1]) : 200;
    const linkage::ModelParams p = bench_params();
    linkage::IntegrationOptions opts;

#ifdef _OPENMP
    const int max_threads = omp_get_max_threads();
#else
    const int max_threads = 1;
#endif
    std::printf("basin map %dx%d, %d thread(s) available\n", resolution, resolution,
                max_threads);

    auto t0 = std::chrono::steady_clock::now();
    const linkage::BasinMap serial = linkage::basin_map_serial(p, resolution, opts);
    const double t_serial = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const linkage::BasinMap parallel = linkage::basin_map(p, resolution, opts);
    const double t_parallel = seconds_since(t0);

    long mismatches = 0;
    for (std::size_t i = 0; i < serial.cells.size(); ++i)
        if (serial.cells[i] != parallel.cells[i]) ++mismatches;

    std::printf("serial   %8.3f s\n", t_serial);
    std::printf("parallel %8.3f s  (speedup %.2fx)\n", t_parallel,
                t_parallel > 0.0 ? t_serial / t_parallel : 0.0);
    std::printf("label mismatches: %ld\n", mismatches);
    return mismatches == 0 ? 0 : 1;
}
