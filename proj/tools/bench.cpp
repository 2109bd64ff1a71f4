// Benchmark: serial reference campaign vs the OpenMP path, plus the raw
// per-fiber solve cost in both scalar kinds.
#include <chrono>
#include <cstdio>

#include "svlab/experiments.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace svlab;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

WeylReport run_weyl(int jobs, WeylMode mode, double h) {
    DiscPolicy policy;
    policy.jobs = jobs;
    WeylWindow w{0.5, 1.5, h};
    return weyl_experiment(sine_model(), w, mode, policy);
}

} // namespace

int main() {
    int max_jobs = 1;
#ifdef _OPENMP
    max_jobs = omp_get_max_threads();
#endif
    std::printf("svlab-bench: sine Weyl campaign, window [0.5, 1.5], numeric mode\n");
    std::printf("max worker threads: %d\n\n", max_jobs);

    for (double h : {0.04, 0.02}) {
        auto t0 = std::chrono::steady_clock::now();
        WeylReport serial = run_weyl(1, WeylMode::numeric, h);
        double ts = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        WeylReport parallel = run_weyl(max_jobs, WeylMode::numeric, h);
        double tp = seconds_since(t0);

        bool same = serial.counted == parallel.counted &&
                    serial.fallback_count == parallel.fallback_count &&
                    serial.failed_count == parallel.failed_count;
        std::printf("h = %-6g fibers = %-4ld serial %8.3fs  omp(%d) %8.3fs  speedup %.2fx  %s\n",
                    h, serial.xi_grid_size, ts, max_jobs, tp, ts / tp,
                    same ? "results identical" : "RESULTS DIFFER");
    }

    // single-fiber solve cost, standard vs extended scalars
    Problem prob{cubic_model(), -1.0, 0.05};
    DiscPolicy policy;
    Discretization disc = auto_discretization(prob, policy);
    auto t0 = std::chrono::steady_clock::now();
    SingularSpectrum ss = solve_fiber(prob, disc, 2, Precision::standard, policy);
    double t_std = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    SingularSpectrum se = solve_fiber(prob, disc, 2, Precision::extended, policy);
    double t_ext = seconds_since(t0);
    std::printf("\nfiber (cubic, xi=-1, h=0.05): standard %0.3fs, extended %0.3fs (%.1fx)\n",
                t_std, t_ext, t_ext / t_std);
    std::printf("  t0 standard %.6e  extended %.6e\n", ss.values[0], se.values[0]);
    return 0;
}
