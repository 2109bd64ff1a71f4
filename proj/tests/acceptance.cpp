// Acceptance suite: every criterion prints one PASS/FAIL line with the
// measured margin; the process exits nonzero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <vector>

#include "oracle.hpp"
#include "svlab/cli.hpp"
#include "svlab/experiments.hpp"

using namespace svlab;

namespace {

int g_failures = 0;
std::chrono::steady_clock::time_point g_t0;

void start() { g_t0 = std::chrono::steady_clock::now(); }

void report(int id, bool pass, const char* name, const std::string& detail) {
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - g_t0).count();
    std::printf("[%2d] %s %-28s %s (%.1fs)\n", id, pass ? "PASS" : "FAIL", name, detail.c_str(),
                secs);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

DiscPolicy extended_policy() {
    DiscPolicy p;
    p.force_precision = true;
    p.precision = Precision::extended;
    return p;
}

} // namespace

int main() {
    std::vector<double> sweep_h{0.12, 0.10, 0.08, 0.06, 0.05};
    std::vector<TunnelingRow> sweep;

    // 1. tunneling leading order: |t0/m_+ - 1| <= 1.5 h, decreasing in h
    start();
    {
        sweep = tunneling_experiment(cubic_model(), {-1.0}, sweep_h, extended_policy());
        bool ok = true;
        double worst = 0.0, prev = 1e9;
        for (const auto& r : sweep) {
            if (r.failed) { ok = false; break; }
            double err = std::abs(r.ratio - 1.0);
            worst = std::max(worst, err / (1.5 * r.h));
            if (err > 1.5 * r.h) ok = false;
            if (err >= prev) ok = false; // monotone decrease along the sweep
            prev = err;
        }
        report(1, ok, "tunneling leading order", fmt("max |ratio-1|/(1.5h) = %.3f", worst));
    }

    // 2. prefactor extraction: slope 1/2 +- 0.05, intercept log(0.7979) +- 0.1
    start();
    {
        double s0 = 4.0 / 3.0;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        bool rows_ok = true;
        for (const auto& r : sweep) {
            if (r.failed || r.t0_numeric <= 0.0) { rows_ok = false; continue; }
            double x = std::log(r.h);
            double y = std::log(r.t0_numeric) + s0 / r.h;
            sx += x; sy += y; sxx += x * x; sxy += x * y; ++n;
        }
        double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        double intercept = (sy - slope * sx) / n;
        double target = std::log(std::sqrt(2.0 / M_PI));
        bool ok = rows_ok && std::abs(slope - 0.5) <= 0.05 && std::abs(intercept - target) <= 0.1;
        report(2, ok, "prefactor extraction",
               fmt("slope = %.4f (want 0.5+-0.05), intercept = %.4f (want %.4f+-0.1)", slope,
                   intercept, target));
    }

    // 3. gap: t1 >= 0.2 sqrt(h); |t1/(2 sqrt h) - 1| <= 0.25 at h = 0.05
    start();
    {
        bool ok = true;
        double harmonic = 0.0;
        for (const auto& r : sweep) {
            if (r.failed || r.t1_numeric < 0.2 * std::sqrt(r.h)) ok = false;
            if (r.h == 0.05) {
                harmonic = std::abs(r.t1_numeric / (2.0 * std::sqrt(r.h)) - 1.0);
                if (harmonic > 0.25) ok = false;
            }
        }
        report(3, ok, "gap above sqrt(h)", fmt("|t1/(2 sqrt h)-1| at h=0.05: %.3f", harmonic));
    }

    // 4. scaling identity with matched grids
    start();
    {
        bool ok = true;
        double worst = 0.0;
        for (double xi : {-0.25, -2.0, -4.0}) {
            auto res = scaling_check(xi, 0.1);
            worst = std::max(worst, res.max_rel_dev);
            if (res.max_rel_dev > 1e-9) ok = false;
        }
        report(4, ok, "scaling identity", fmt("max rel dev = %.3e (tol 1e-9)", worst));
    }

    // 5. sine xi <-> -xi symmetry
    start();
    {
        bool ok = true;
        double worst = 0.0;
        DiscPolicy pol = extended_policy();
        for (double xi : {0.3, 0.5, 0.7}) {
            Problem pp{sine_model(), xi, 0.05}, pm{sine_model(), -xi, 0.05};
            auto sp = solve_fiber(pp, auto_discretization(pp, pol), 1, Precision::extended, pol);
            auto sm = solve_fiber(pm, auto_discretization(pm, pol), 1, Precision::extended, pol);
            double tol = 1e-12 * std::max(sp.scale, sm.scale);
            double diff = std::abs(sp.values[0] - sm.values[0]);
            worst = std::max(worst, diff / tol);
            if (diff > tol) ok = false;
        }
        report(5, ok, "sine symmetry", fmt("max |dt0| / (1e-12 scale) = %.3f", worst));
    }

    // 6. kernel fiber: sine xi = 0, N = 800: t0 <= 1e-10
    start();
    {
        Problem p{sine_model(), 0.0, 0.1};
        FourierDisc fd;
        fd.n_modes = 800;
        DiscPolicy pol;
        auto s = solve_fiber(p, fd, 1, Precision::standard, pol);
        bool ok = s.values[0] <= 1e-10;
        report(6, ok, "kernel fiber", fmt("t0 = %.3e (tol 1e-10)", s.values[0]));
    }

    // 7. two-exponential circle formula
    start();
    {
        auto rows = tunneling_experiment(sine_model(), {-0.5, -0.3}, {0.08, 0.06});
        bool ok = true;
        double worst = 0.0;
        for (const auto& r : rows) {
            if (r.failed) { ok = false; continue; }
            double err = std::abs(r.ratio - 1.0);
            worst = std::max(worst, err / (1.5 * r.h));
            if (err > 1.5 * r.h) ok = false;
        }
        report(7, ok, "circle tunneling formula", fmt("max |ratio-1|/(1.5h) = %.3f", worst));
    }

    // 8. overlap oracle vs certified t0
    start();
    {
        bool ok = true;
        double prev = 1e9, worst = 0.0;
        auto rows = tunneling_experiment(cubic_model(), {-1.0}, {0.1, 0.08, 0.06},
                                         extended_policy());
        for (const auto& r : rows) {
            if (r.failed) { ok = false; continue; }
            double ov = overlap_estimate({cubic_model(), r.xi, r.h}, (4.0 / 3.0) / 4.0);
            double rel = std::abs(ov / r.t0_numeric - 1.0);
            worst = std::max(worst, rel / (2.0 * r.h));
            if (rel > 2.0 * r.h) ok = false;
            if (rel >= prev) ok = false; // decreasing in h
            prev = rel;
        }
        report(8, ok, "overlap oracle", fmt("max rel/(2h) = %.3f", worst));
    }

    // 9. subelliptic scale at xi = 0
    start();
    {
        bool ok = true;
        std::string seq;
        for (double h : {0.1, 0.05, 0.025, 0.0125}) {
            Problem p{cubic_model(), 0.0, h};
            DiscPolicy pol;
            auto s = solve_fiber(p, auto_discretization(p, pol), 1, Precision::standard, pol);
            double scaled = s.values[0] * std::pow(h, -2.0 / 3.0);
            seq += fmt("%.3f ", scaled);
            if (scaled < 0.3 || scaled > 3.0) ok = false;
            if (s.values[0] < 1.0 / resolvent_bound(0.0, h)) ok = false;
        }
        report(9, ok, "subelliptic scale", fmt("t0 h^{-2/3} = %s(bracket [0.3, 3])", seq.c_str()));
    }

    // 10. elliptic bound
    start();
    {
        auto table = resolvent_experiment(cubic_model(), 0.05, {0.25, 0.5, 1.0});
        bool ok = true;
        double worst_c = 0.0;
        for (const auto& r : table.rows) {
            if (r.failed || !r.bound_ok) ok = false;
            worst_c = std::max(worst_c, r.empirical_c);
            if (r.empirical_c > 3.0) ok = false;
        }
        report(10, ok, "elliptic bound", fmt("max empirical C = %.3f (tol 3)", worst_c));
    }

    // 11. Weyl count: numeric at h = 0.02, then h = 0.01 (closed-form fast path)
    start();
    {
        WeylWindow w1{0.5, 1.5, 0.02};
        auto rep1 = weyl_experiment(sine_model(), w1, WeylMode::numeric);
        bool ok1 = std::abs(rep1.discrepancy) <= 8.0 && rep1.failed_count == 0;

        WeylWindow w2{0.5, 1.5, 0.01};
        auto rep2 = weyl_experiment(sine_model(), w2, WeylMode::predicted_t0);
        bool ok2 = std::abs(rep2.discrepancy) / rep2.predicted <= 0.15;
        report(11, ok1 && ok2, "Weyl count",
               fmt("h=0.02: %ld vs %.2f (svd on %ld of %ld fibers); h=0.01: %ld vs %.2f",
                   rep1.counted, rep1.predicted, rep1.xi_grid_size - rep1.fallback_count -
                       rep1.skipped_elliptic - rep1.failed_count,
                   rep1.xi_grid_size, rep2.counted, rep2.predicted));
    }

    // 12. degenerate regime: xi = -K h^{2/3}
    start();
    {
        double h = 0.01, h23 = std::pow(h, 2.0 / 3.0);
        bool ok = true;
        double fitted_c = 0.0, prev = 1e9;
        std::string seq;
        for (double K : {3.0, 5.0, 8.0}) {
            double xi = -K * h23;
            auto rows = tunneling_experiment(cubic_model(), {xi}, {h}, extended_policy());
            if (rows[0].failed) { ok = false; continue; }
            double err = std::abs(rows[0].ratio - 1.0);
            double scale_err = h * std::pow(-xi, -1.5);
            fitted_c = std::max(fitted_c, err / scale_err);
            seq += fmt("%.4f ", err);
            if (err >= prev) ok = false; // decreasing in K
            prev = err;
        }
        if (fitted_c > 5.0) ok = false;
        report(12, ok, "degenerate regime", fmt("fitted C = %.3f (tol 5); |ratio-1| seq = %s",
                                                fitted_c, seq.c_str()));
    }

    // 13. oracle suite: random banded instances vs Hermitian-dilation eigenvalues
    start();
    {
        std::mt19937_64 rng(20260810);
        std::uniform_int_distribution<int> dim(1, 12), kd(1, 3);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        bool ok = true;
        double worst = 0.0;
        for (int trial = 0; trial < 200; ++trial) {
            int n = dim(rng);
            std::uniform_int_distribution<int> bw(0, n - 1);
            BandedComplexMatrix A(n, bw(rng), bw(rng));
            for (int j = 0; j < n; ++j) {
                int ilo = std::max(0, j - A.ku), ihi = std::min(n - 1, j + A.kl);
                for (int i = ilo; i <= ihi; ++i) A.set(i, j, {u(rng), u(rng)});
            }
            A.compute_scale();
            int k = std::min(n, kd(rng));
            auto s = smallest_singular_values(A, k, 1e-12);
            auto ref = dilation_singular_values(A);
            for (int j = 0; j < k; ++j) {
                double err = std::abs(s.values[size_t(j)] - ref[size_t(j)]) / A.scale;
                worst = std::max(worst, err);
                if (err > 1e-12) ok = false;
            }
        }
        report(13, ok, "oracle suite", fmt("200 instances, max |dt|/scale = %.2e (tol 1e-12)",
                                           worst));
    }

    std::printf("%s: %d of 13 criteria passed\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                13 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
