#include "svlab/experiments.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "svlab/quad.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace svlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double smoothstep_d(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    double u = t * (1.0 - t);
    return 30.0 * u * u;
}

double phase(const Problem& p, double y) { return eval_model(p.model, y, p.xi).f; }

// solve f(y) = target on [lo, hi] (f strictly monotone there)
double phase_root(const Problem& p, double target, double lo, double hi) {
    return bisect([&](double y) { return phase(p, y) - target; }, lo, hi, 1e-14);
}

double tol_for(const DiscPolicy& policy, Precision kind, int n) {
    // rounding in the residual evaluation accumulates like n * eps
    double eps = kind == Precision::standard ? real_eps<double>::value : real_eps<DD>::value;
    return std::max(policy.solve_tol_eps, 30.0 * double(n)) * eps;
}

Precision pick_precision(const DiscPolicy& policy, double hint, double scale) {
    if (policy.force_precision) return policy.precision;
    if (hint < 0.0 || hint >= 30.0 * precision_floor(Precision::standard, scale))
        return Precision::standard;
    if (hint >= 30.0 * precision_floor(Precision::extended, scale)) return Precision::extended;
    throw PrecisionError("predicted t0 below the extended accuracy floor");
}

} // namespace

const char* to_string(WeylMode m) { return m == WeylMode::numeric ? "numeric" : "predicted_t0"; }

const char* to_string(FiberSource s) {
    switch (s) {
        case FiberSource::svd: return "svd";
        case FiberSource::predicted: return "predicted";
        case FiberSource::skipped_elliptic: return "skipped_elliptic";
        case FiberSource::failed: return "failed";
    }
    return "?";
}

void parallel_for_indexed(int n, int jobs, const std::function<void(int)>& body) {
#ifdef _OPENMP
    if (jobs > 1) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
#else
    (void)jobs;
#endif
    for (int i = 0; i < n; ++i) body(i);
}

Discretization auto_discretization(const Problem& problem, const DiscPolicy& policy) {
    validate_problem(problem);
    if (problem.model.kind == Model::Sine) {
        FourierDisc fd;
        if (policy.n_modes_override > 0) {
            fd.n_modes = policy.n_modes_override;
            fd.allow_small = true;
            return fd;
        }
        fd.n_modes = int(std::ceil(fourier_c_modes() / problem.h));
        return fd;
    }
    GridDisc g;
    g.stencil_order = policy.grid_stencil;
    double L;
    if (problem.xi < 0.0) {
        WellPair w = wells(problem.model, problem.xi);
        double s0 = action_S0(problem.model, problem.xi);
        // enough Agmon decay beyond the wells: d(y_+, L) >= S0 + margin*h
        double target = phase(problem, w.y_plus) + s0 + policy.truncation_margin_log * problem.h;
        L = phase_root(problem, target, w.y_plus, w.y_plus + 50.0);
    } else {
        L = 2.5 + std::sqrt(std::abs(problem.xi));
    }
    double invariant_min = std::max(1.0, std::sqrt(std::abs(problem.xi))) + 1.0;
    if (L < invariant_min * 1.05) L = invariant_min * 1.05;
    if (policy.half_width_override > 0.0) L = policy.half_width_override;
    g.half_width = L;
    if (policy.grid_points_override > 0) {
        g.points = policy.grid_points_override;
        g.allow_coarse = true;
        return g;
    }
    double dy = std::min(problem.h / policy.grid_points_per_h,
                         policy.grid_dy_curvature * problem.h * problem.h);
    int pts = int(std::ceil(2.0 * L / dy)) + 1;
    if (pts < 16) pts = 16;
    if (pts > policy.max_points)
        throw SizeError("auto_discretization: grid would exceed the point budget");
    g.points = pts;
    return g;
}

namespace {

// The order-2 grid matrix carries every fiber singular value twice (exact
// checkerboard involution); keep the even-indexed representatives.
SingularSpectrum strip_twin_pairs(const SingularSpectrum& sp, int k) {
    double floor = precision_floor(sp.precision_kind, sp.scale);
    for (int j = 0; j < k; ++j) {
        double a = sp.values[size_t(2 * j)], b = sp.values[size_t(2 * j + 1)];
        if (std::abs(b - a) > std::max(1e-6 * std::abs(a), 10.0 * floor)) {
            // twin structure absent (strongly elliptic fiber): keep raw values
            SingularSpectrum raw = sp;
            raw.values.resize(size_t(k));
            raw.residuals.resize(size_t(k));
            raw.below_floor.resize(size_t(k));
            raw.next_value = sp.values.size() > size_t(k) ? sp.values[size_t(k)] : sp.next_value;
            return raw;
        }
    }
    SingularSpectrum out = sp;
    out.values.resize(size_t(k));
    out.residuals.resize(size_t(k));
    out.below_floor.resize(size_t(k));
    for (int j = 0; j < k; ++j) {
        out.values[size_t(j)] = sp.values[size_t(2 * j)];
        out.residuals[size_t(j)] = sp.residuals[size_t(2 * j)];
        out.below_floor[size_t(j)] = sp.below_floor[size_t(2 * j)];
    }
    out.next_value = sp.next_value;
    return out;
}

} // namespace

SingularSpectrum solve_fiber(const Problem& problem, const Discretization& disc, int k,
                             Precision kind, const DiscPolicy& policy, double hint) {
    bool twin = std::holds_alternative<GridDisc>(disc) &&
                std::get<GridDisc>(disc).stencil_order == 2 && k >= 2;
    int k_solve = twin ? 2 * k : k;
    SvdOptions opts;
    opts.hint_t0 = hint;
    SingularSpectrum s;
    if (kind == Precision::extended) {
        Banded<DD> A = build_matrix_t<DD>(problem, disc);
        s = smallest_singular_values(A, k_solve, tol_for(policy, kind, A.n), opts);
    } else {
        Banded<double> A = build_matrix_t<double>(problem, disc);
        Precision saved = current_precision();
        set_precision(Precision::standard);
        try {
            s = smallest_singular_values(A, k_solve, tol_for(policy, kind, A.n), opts);
        } catch (...) {
            set_precision(saved);
            throw;
        }
        set_precision(saved);
    }
    return twin ? strip_twin_pairs(s, k) : s;
}

std::vector<TunnelingRow> tunneling_experiment(ModelSpec model, const std::vector<double>& xi_list,
                                               const std::vector<double>& h_list,
                                               const DiscPolicy& policy) {
    std::vector<TunnelingRow> rows(xi_list.size() * h_list.size());
    int n = int(rows.size());
    parallel_for_indexed(n, policy.jobs, [&](int idx) {
        TunnelingRow& row = rows[size_t(idx)];
        row.xi = xi_list[size_t(idx) / h_list.size()];
        row.h = h_list[size_t(idx) % h_list.size()];
        Problem prob{model, row.xi, row.h};
        try {
            Prediction pred = m_plus(prob);
            row.t0_predicted = pred.value;
            row.regime_tag = pred.regime;
            row.t1_predicted = t1_lower_bound(prob);
            Discretization disc = auto_discretization(prob, policy);
            Banded<double> probe = build_matrix_t<double>(prob, disc);
            Precision kind = pred.regime == Regime::kernel
                                 ? Precision::standard
                                 : pick_precision(policy, pred.value, probe.scale);
            double hint = pred.regime == Regime::kernel ? -1.0 : pred.value;
            SingularSpectrum sp = solve_fiber(prob, disc, 2, kind, policy, hint);
            row.t0_numeric = sp.values[0];
            row.t1_numeric = sp.values[1];
            row.precision_used = kind;
            row.ratio = row.t0_predicted > 0.0 ? row.t0_numeric / row.t0_predicted
                                               : std::numeric_limits<double>::quiet_NaN();
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
    });
    return rows;
}

double overlap_estimate(const Problem& problem, double eta) {
    validate_problem(problem);
    if (!has_wells(problem.model, problem.xi))
        throw DomainError("overlap_estimate: wells required");
    double s0 = action_S0(problem.model, problem.xi);
    if (!(eta > 0.0) || !(eta < 0.5 * s0))
        throw DomainError("overlap_estimate: cut-off margin must satisfy 0 < eta < S0/2");
    WellPair w = wells(problem.model, problem.xi);
    const double h = problem.h;
    auto f = [&](double y) { return phase(problem, y); };
    double fp = f(w.y_plus);
    const double tail = 60.0 * h;

    if (problem.model.kind == Model::Cubic) {
        double fm = f(w.y_minus);
        // chi_+ rises across [c1, c2] (Agmon radius eta/2..eta from y_-),
        // chi_- falls across [c3, c4] (radius eta..eta/2 from y_+)
        double c1 = phase_root(problem, fm - 0.5 * eta, w.y_minus, w.y_plus);
        double c2 = phase_root(problem, fm - eta, w.y_minus, w.y_plus);
        double c3 = phase_root(problem, fp + eta, w.y_minus, w.y_plus);
        double c4 = phase_root(problem, fp + 0.5 * eta, w.y_minus, w.y_plus);
        double R = phase_root(problem, fp + tail, w.y_plus, w.y_plus + 100.0);
        double Lm = phase_root(problem, fm - tail, w.y_minus - 100.0, w.y_minus);

        auto chi_p = [&](double y) { return smoothstep((y - c1) / (c2 - c1)); };
        auto chi_p_d = [&](double y) { return smoothstep_d((y - c1) / (c2 - c1)) / (c2 - c1); };
        auto chi_m = [&](double y) { return 1.0 - smoothstep((y - c3) / (c4 - c3)); };

        double np2 = adaptive_simpson_split(
            [&](double y) {
                double c = chi_p(y);
                return c * c * std::exp(-2.0 * (f(y) - fp) / h);
            },
            c1, R, {c2, w.y_plus}, 1e-290, 1e-12);
        double nm2 = adaptive_simpson_split(
            [&](double y) {
                double c = chi_m(y);
                return c * c * std::exp(2.0 * (f(y) - fm) / h);
            },
            Lm, c4, {w.y_minus, c3}, 1e-290, 1e-12);
        double cross = h * adaptive_simpson(
                               [&](double y) {
                                   return chi_p_d(y) * chi_m(y) *
                                          std::exp(((fp - f(y)) + (f(y) - fm)) / h);
                               },
                               c1, c2, 1e-290, 1e-12);
        return std::abs(cross) / std::sqrt(np2 * nm2);
    }

    // circle: work on the cut interval J = ]y_- - 2pi, y_-[ with the real branch of f
    double ym = w.y_minus, yp = w.y_plus, yl = w.y_minus - kTwoPi;
    double fm = f(ym), fl = f(yl);
    // chi_+ transitions near both representatives of y_-
    double r_hi = phase_root(problem, fm - 0.5 * eta, yp, ym);
    double r_lo = phase_root(problem, fm - eta, yp, ym);
    double l_lo = phase_root(problem, fl - 0.5 * eta, yl, yp);
    double l_hi = phase_root(problem, fl - eta, yl, yp);
    // chi_- transitions near both sides of y_+
    double q1 = phase_root(problem, fp + 0.5 * eta, yp, ym);
    double q2 = phase_root(problem, fp + eta, yp, ym);
    double p1 = phase_root(problem, fp + eta, yl, yp);
    double p2 = phase_root(problem, fp + 0.5 * eta, yl, yp);

    auto chi_p = [&](double y) {
        if (y < yp) return smoothstep((y - l_lo) / (l_hi - l_lo));
        return 1.0 - smoothstep((y - r_lo) / (r_hi - r_lo));
    };
    auto chi_p_d = [&](double y) {
        if (y < yp) return smoothstep_d((y - l_lo) / (l_hi - l_lo)) / (l_hi - l_lo);
        return -smoothstep_d((y - r_lo) / (r_hi - r_lo)) / (r_hi - r_lo);
    };
    auto chi_m = [&](double y) {
        if (y < yp) return 1.0 - smoothstep((y - p1) / (p2 - p1));
        return smoothstep((y - q1) / (q2 - q1));
    };

    double np2 = adaptive_simpson_split(
        [&](double y) {
            double c = chi_p(y);
            return c * c * std::exp(-2.0 * (f(y) - fp) / h);
        },
        l_lo, r_hi, {l_hi, yp, r_lo}, 1e-290, 1e-12);
    // u_- peaks at y_-; both interval endpoints represent the same circle point
    double nm2 = adaptive_simpson_split(
                     [&](double y) {
                         double c = chi_m(y);
                         return c * c * std::exp(2.0 * (f(y) - fm) / h);
                     },
                     q1, ym, {q2}, 1e-290, 1e-12) +
                 adaptive_simpson_split(
                     [&](double y) {
                         double c = chi_m(y);
                         return c * c * std::exp(2.0 * (f(y) - fl) / h);
                     },
                     yl, p2, {p1}, 1e-290, 1e-12);
    double cross_right = h * adaptive_simpson(
                                 [&](double y) {
                                     return chi_p_d(y) * chi_m(y) *
                                            std::exp(((fp - f(y)) + (f(y) - fm)) / h);
                                 },
                                 r_lo, r_hi, 1e-290, 1e-12);
    double cross_left = h * adaptive_simpson(
                                [&](double y) {
                                    return chi_p_d(y) * chi_m(y) *
                                           std::exp(((fp - f(y)) + (f(y) - fl)) / h);
                                },
                                l_lo, l_hi, 1e-290, 1e-12);
    return std::abs(cross_left + cross_right) / std::sqrt(np2 * nm2);
}

ScalingCheckResult scaling_check(double xi, double h, const DiscPolicy& policy) {
    if (!(xi < 0.0)) throw DomainError("scaling_check: Cubic scaling requires xi < 0");
    double alpha = std::sqrt(-xi);
    double htil = h / std::pow(-xi, 1.5);
    if (!(htil > 0.0 && htil <= 1.0))
        throw DomainError("scaling_check: scaled parameter h|xi|^{-3/2} outside ]0,1]");
    Problem lhs_prob{cubic_model(), xi, h};
    Problem rhs_prob{cubic_model(), -1.0, htil};

    GridDisc gr = std::get<GridDisc>(auto_discretization(rhs_prob, policy));
    // widen so the alpha-scaled image also satisfies the lhs half-width rule
    double min_lhs_width = (std::max(1.0, std::sqrt(-xi)) + 1.0) * 1.05;
    if (alpha * gr.half_width < min_lhs_width) {
        double grow = min_lhs_width / (alpha * gr.half_width);
        gr.half_width *= grow;
        gr.points = int(std::ceil(double(gr.points - 1) * grow)) + 1;
    }
    // and refine so both resolution rules hold on the scaled image
    double dy_r = 2.0 * gr.half_width / double(gr.points - 1);
    double dy_r_max = h / (4.0 * alpha);
    if (dy_r > dy_r_max) {
        gr.points = int(std::ceil(2.0 * gr.half_width / dy_r_max)) + 1;
    }
    if (gr.points > policy.max_points) throw SizeError("scaling_check: grid too large");
    GridDisc gl = gr;
    gl.half_width = alpha * gr.half_width;

    ScalingCheckResult res;
    {
        Banded<DD> A = build_cubic_matrix_t<DD>(lhs_prob, gl);
        res.lhs = smallest_singular_values(A, 3, tol_for(policy, Precision::extended, A.n));
    }
    {
        Banded<DD> A = build_cubic_matrix_t<DD>(rhs_prob, gr);
        res.rhs_scaled = smallest_singular_values(A, 3, tol_for(policy, Precision::extended, A.n));
    }
    for (double& v : res.rhs_scaled.values) v *= -xi;
    res.rhs_scaled.next_value *= -xi;
    double dev = 0.0;
    for (int j = 0; j < 3; ++j) {
        double a = res.lhs.values[size_t(j)], b = res.rhs_scaled.values[size_t(j)];
        double den = std::max(std::abs(a), std::abs(b));
        if (den > 0.0) dev = std::max(dev, std::abs(a - b) / den);
    }
    res.max_rel_dev = dev;
    return res;
}

ResolventTable resolvent_experiment(ModelSpec model, double h, const std::vector<double>& xi_grid,
                                    const DiscPolicy& policy) {
    ResolventTable table;
    table.h = h;
    table.rows.resize(xi_grid.size());
    double h23 = std::pow(h, 2.0 / 3.0);
    parallel_for_indexed(int(xi_grid.size()), policy.jobs, [&](int i) {
        ResolventRow& row = table.rows[size_t(i)];
        row.xi = xi_grid[size_t(i)];
        Problem prob{model, row.xi, h};
        try {
            // Sine uses the symmetric bound with |xi|-1 in place of xi
            double xi_eff = model.kind == Model::Cubic ? row.xi : std::abs(row.xi) - 1.0;
            row.bound = resolvent_bound(xi_eff, h);
            Discretization disc = auto_discretization(prob, policy);
            SingularSpectrum sp = solve_fiber(prob, disc, 1, Precision::standard, policy);
            row.t0 = sp.values[0];
            row.bound_ok = row.t0 >= 1.0 / row.bound;
            row.empirical_c = (std::abs(row.xi) + h23) / row.t0;
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
    });
    for (const auto& r : table.rows)
        if (!r.failed && r.empirical_c > table.max_empirical_c)
            table.max_empirical_c = r.empirical_c;
    return table;
}

WeylReport weyl_experiment(ModelSpec model, const WeylWindow& window, WeylMode mode,
                           const DiscPolicy& policy, bool normalize_sqrt_h) {
    validate_window(model, window);
    WeylReport rep;
    rep.window = window;
    rep.mode = mode;
    rep.normalize_sqrt_h = normalize_sqrt_h;
    const double h = window.h;

    // counting gate h << delta^{3/2}/log(1/delta)
    double delta = model.kind == Model::Cubic ? std::pow(0.75 * window.a, 2.0 / 3.0)
                                              : 1.0 - std::abs(s0_inverse(model, window.a).back());
    rep.csv21_delta = delta;
    if (delta < 1.0 && delta > 0.0)
        rep.csv21_warning = h > std::pow(delta, 1.5) / std::log(1.0 / delta);

    // fiber lattice: everything inside D(S0) that can reach the window,
    // with a 6h safety margin beyond the preimage of [a,b]
    long jlo, jhi;
    if (model.kind == Model::Cubic) {
        double xi_b = s0_inverse(model, window.b)[0];
        double xi_a = s0_inverse(model, window.a)[0];
        jlo = long(std::ceil((xi_b - 6.0 * h) / h));
        jhi = long(std::floor(std::min(-h, xi_a + 6.0 * h) / h));
    } else {
        long J = long(std::ceil(1.0 / h)) - 1;
        while (double(J) * h >= 1.0) --J;
        jlo = -J;
        jhi = J;
    }
    if (jhi < jlo) {
        rep.predicted = weyl_predicted(model, window);
        rep.discrepancy = -rep.predicted;
        return rep;
    }
    int nf = int(jhi - jlo + 1);
    rep.xi_grid_size = nf;
    rep.fibers.resize(size_t(nf));

    double shift = normalize_sqrt_h ? 0.5 * std::log(h) : 0.0;
    double lo_log = -window.b / h + shift;
    double hi_log = -window.a / h + shift;

    parallel_for_indexed(nf, policy.jobs, [&](int i) {
        WeylFiber& fib = rep.fibers[size_t(i)];
        double xi = double(jlo + i) * h;
        fib.xi = xi;
        Problem prob{model, xi, h};
        try {
            Prediction pred = m_plus(prob);
            if (mode == WeylMode::predicted_t0) {
                fib.source = FiberSource::predicted;
                fib.log_t0 = pred.log_value;
                fib.counted = pred.log_value >= lo_log && pred.log_value <= hi_log;
                return;
            }
            if (pred.regime == Regime::elliptic) {
                // t0 >= (|xi|+h^{2/3})/C sits far above any exponential window
                fib.source = FiberSource::skipped_elliptic;
                fib.counted = false;
                return;
            }
            Discretization disc = auto_discretization(prob, policy);
            Banded<double> probe = build_matrix_t<double>(prob, disc);
            double floor_ext = precision_floor(Precision::extended, probe.scale);
            if (pred.regime != Regime::kernel && pred.value < 3.0 * floor_ext) {
                // below the extended accuracy floor: decide from the closed form
                fib.source = FiberSource::predicted;
                fib.log_t0 = pred.log_value;
                fib.counted = pred.log_value >= lo_log && pred.log_value <= hi_log;
                return;
            }
            double floor_std = precision_floor(Precision::standard, probe.scale);
            Precision kind = (pred.regime != Regime::kernel && pred.value >= 30.0 * floor_std)
                                 ? Precision::standard
                                 : Precision::extended;
            if (pred.regime == Regime::kernel) kind = Precision::standard;
            SingularSpectrum sp = solve_fiber(prob, disc, 1, kind, policy,
                                              pred.regime == Regime::kernel ? -1.0 : pred.value);
            fib.precision_used = kind;
            double t0 = sp.values[0];
            if (pred.regime == Regime::kernel || (sp.below_floor[0] != 0)) {
                // numerically indistinguishable from 0; the kernel fiber is exact
                fib.source = pred.regime == Regime::kernel ? FiberSource::svd : FiberSource::predicted;
                fib.log_t0 = pred.log_value;
                fib.counted = pred.log_value >= lo_log && pred.log_value <= hi_log;
                return;
            }
            fib.source = FiberSource::svd;
            fib.log_t0 = std::log(t0);
            fib.counted = fib.log_t0 >= lo_log && fib.log_t0 <= hi_log;
        } catch (const std::exception& e) {
            fib.source = FiberSource::failed;
            fib.counted = false;
            fib.error = e.what();
        }
    });

    for (const auto& fb : rep.fibers) {
        if (fb.counted) ++rep.counted;
        if (fb.source == FiberSource::failed) ++rep.failed_count;
        if (fb.source == FiberSource::skipped_elliptic) ++rep.skipped_elliptic;
        if (mode == WeylMode::numeric && fb.source == FiberSource::predicted) ++rep.fallback_count;
    }
    rep.predicted = weyl_predicted(model, window);
    rep.discrepancy = double(rep.counted) - rep.predicted;
    return rep;
}

} // namespace svlab
