#include "svlab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "svlab/quad.hpp"

namespace svlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.141592653589793238462643383279;

double mod_2pi(double x) {
    double w = std::fmod(x, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    return w;
}

// zeros of xi + phi'(y) inside ]lo, hi[
std::vector<double> weight_zeros(ModelSpec model, double xi, double lo, double hi) {
    std::vector<double> zs;
    if (model.kind == Model::Cubic) {
        if (xi < 0.0) {
            double r = std::sqrt(-xi);
            for (double z : {-r, r})
                if (z > lo && z < hi) zs.push_back(z);
        }
    } else {
        if (std::abs(xi) <= 1.0) {
            double y0 = std::acos(-xi); // cos(y0) = -xi
            double kmin = std::floor((lo + kPi) / kTwoPi) - 1.0;
            double kmax = std::ceil((hi + kPi) / kTwoPi) + 1.0;
            for (double k = kmin; k <= kmax; k += 1.0) {
                for (double z : {y0 + k * kTwoPi, -y0 + k * kTwoPi})
                    if (z > lo && z < hi) zs.push_back(z);
            }
        }
    }
    return zs;
}

double la_integral(ModelSpec model, double xi, double lo, double hi) {
    if (lo == hi) return 0.0;
    if (lo > hi) std::swap(lo, hi);
    auto f = [&](double y) { return std::abs(xi + eval_model(model, y, xi).dphi); };
    return adaptive_simpson_split(f, lo, hi, weight_zeros(model, xi, lo, hi), 1e-12, 1e-14);
}

} // namespace

const char* to_string(Regime r) {
    switch (r) {
        case Regime::elliptic: return "elliptic";
        case Regime::boundary: return "boundary";
        case Regime::degenerate: return "degenerate";
        case Regime::nondegenerate: return "nondegenerate";
        case Regime::large_xi: return "large_xi";
        case Regime::kernel: return "kernel";
    }
    return "?";
}

const char* to_string(SignTag s) {
    switch (s) {
        case SignTag::positive: return "positive";
        case SignTag::negative: return "negative";
        case SignTag::not_applicable: return "not_applicable";
    }
    return "?";
}

double agmon_distance(const Problem& problem, double y1, double y2, Segment segment) {
    if (!std::isfinite(y1) || !std::isfinite(y2))
        throw DomainError("agmon_distance: coordinates must be finite");
    if (problem.model.kind == Model::Cubic) return la_integral(problem.model, problem.xi, y1, y2);
    // circle: pick the requested arc
    if (segment == Segment::forward) {
        double len = mod_2pi(y2 - y1);
        return la_integral(problem.model, problem.xi, y1, y1 + len);
    }
    double len = mod_2pi(y1 - y2);
    return la_integral(problem.model, problem.xi, y1 - len, y1);
}

double sine_S0_abs(double u) {
    // 2 (sin(y_-) - |xi| y_-) with y_- = arccos(|xi|); strictly decreasing in u
    double ym = std::acos(u);
    return 2.0 * (std::sin(ym) - u * ym);
}

double action_S0(ModelSpec model, double xi) {
    if (model.kind == Model::Cubic) {
        if (!(xi < 0.0)) throw DomainError("action_S0: Cubic requires xi < 0");
        return (4.0 / 3.0) * std::pow(-xi, 1.5);
    }
    DJPair d = dJ_distances(xi);
    return std::min(d.d_short, d.d_long);
}

DJPair dJ_distances(double xi) {
    if (!(std::abs(xi) < 1.0)) throw DomainError("dJ_distances: Sine requires |xi| < 1");
    // On the monotone arcs of f(y,xi) = xi*y + sin y:
    //   d_short = f(y_-) - f(y_+) = 2 (xi y_- + sin y_-),  y_- = arccos(-xi)
    //   d_long  = f(y_- - 2pi) - f(y_+) = d_short - 2 pi xi
    double ym = std::acos(-xi);
    double ds = 2.0 * (xi * ym + std::sin(ym));
    return {ds, ds - kTwoPi * xi};
}

Regime regime(const Problem& problem, const RegimeCuts& cuts) {
    validate_problem(problem);
    double h23 = std::pow(problem.h, 2.0 / 3.0);
    bool cubic = problem.model.kind == Model::Cubic;
    if (!cubic && problem.xi == 0.0) return Regime::kernel;
    // distance to the degeneracy of the well pair
    double dist = cubic ? -problem.xi : 1.0 - std::abs(problem.xi);
    if (dist <= cuts.elliptic_c0 * h23) return Regime::elliptic;
    if (cubic && -problem.xi >= cuts.large_xi_cut) return Regime::large_xi;
    if (dist >= cuts.compact_threshold) return Regime::nondegenerate;
    if (dist <= cuts.boundary_c * h23) return Regime::boundary;
    // Inside the shrinking-well range: degenerate only when the counting gate
    // h <= dist^(3/2)/(c log(1/dist)) still holds, boundary otherwise.
    double gate = std::pow(dist, 1.5) / (cuts.csv21_c * std::log(1.0 / dist));
    return problem.h <= gate ? Regime::degenerate : Regime::boundary;
}

Prediction m_plus(const Problem& problem) {
    validate_problem(problem);
    bool cubic = problem.model.kind == Model::Cubic;
    if (cubic && !(problem.xi < 0.0))
        throw DomainError("m_plus: Cubic requires xi < 0");
    if (!cubic && !(std::abs(problem.xi) < 1.0))
        throw DomainError("m_plus: Sine requires |xi| < 1");

    Prediction p{};
    p.regime = regime(problem);
    if (p.regime == Regime::kernel) {
        p.value = 0.0;
        p.log_value = -std::numeric_limits<double>::infinity();
        p.sign = SignTag::not_applicable;
        p.relative_error_scale = 0.0;
        return p;
    }

    WellPair w = wells(problem.model, problem.xi);
    double bp = poisson_bracket_modulus(problem.model, w.y_plus);
    double bm = poisson_bracket_modulus(problem.model, w.y_minus);
    // a0^pm = (|{p,pbar}(y_pm,0)|/(2 pi))^{1/4}: the Laplace normalization of
    // ||chi e^{-d/h}||^2 = a^{-2} is sqrt(pi h/|f''|), fixing the constant.
    double log_pref = 0.5 * std::log(problem.h) +
                      0.25 * std::log(bp / (2.0 * kPi)) + 0.25 * std::log(bm / (2.0 * kPi));

    if (cubic) {
        double s0 = action_S0(problem.model, problem.xi);
        p.log_value = log_pref - s0 / problem.h;
        p.sign = SignTag::positive;
    } else {
        DJPair d = dJ_distances(problem.xi);
        double dmin = std::min(d.d_short, d.d_long);
        double gap = std::abs(d.d_long - d.d_short);
        // |e^{-d_long/h} - e^{-d_short/h}| without cancellation
        p.log_value = log_pref - dmin / problem.h + std::log1p(-std::exp(-gap / problem.h));
        p.sign = d.d_long < d.d_short ? SignTag::positive : SignTag::negative;
    }
    p.value = std::exp(p.log_value);

    double dist = cubic ? -problem.xi : 1.0 - std::abs(problem.xi);
    p.relative_error_scale =
        p.regime == Regime::nondegenerate ? problem.h : problem.h * std::pow(dist, -1.5);
    return p;
}

std::vector<double> harmonic_levels(const Problem& problem, Witten which, int k) {
    validate_problem(problem);
    if (!has_wells(problem.model, problem.xi))
        throw DomainError("harmonic_levels: no wells for this xi");
    if (k < 1) throw DomainError("harmonic_levels: k must be >= 1");
    WellPair w = wells(problem.model, problem.xi);
    std::vector<double> lv;
    lv.reserve(2 * size_t(k));
    for (double lambda : {w.curvature_plus, w.curvature_minus}) {
        for (int j = 0; j < k; ++j) {
            double base = std::abs(lambda) * (2.0 * j + 1.0);
            lv.push_back(problem.h * (which == Witten::Qplus ? base - lambda : base + lambda));
        }
    }
    std::sort(lv.begin(), lv.end());
    return lv;
}

double t1_lower_bound(const Problem& problem) {
    validate_problem(problem);
    if (has_wells(problem.model, problem.xi)) {
        WellPair w = wells(problem.model, problem.xi);
        double lmin = std::min(w.curvature_plus, -w.curvature_minus);
        return std::sqrt(2.0 * problem.h * lmin);
    }
    return (std::abs(problem.xi) + std::pow(problem.h, 2.0 / 3.0)) / default_t1_c0();
}

double resolvent_bound(double xi, double h) {
    if (!(h > 0.0 && h <= 1.0)) throw DomainError("resolvent_bound: h must lie in ]0,1]");
    double h23 = std::pow(h, 2.0 / 3.0);
    double cut = std::pow(0.25 * h, 2.0 / 3.0);
    if (xi >= cut) return std::exp(h * h / (48.0 * xi * xi * xi)) / xi;
    if (xi >= 0.0) return std::pow(4.0 / h, 2.0 / 3.0) * std::exp(1.0 / 3.0);
    if (-xi <= 0.5 * h23) return 2.0 * std::exp(4.0 / 3.0) / h23;
    // explicit weight bound with alpha = -xi + h/(2^{3/2} sqrt(-xi)); a true
    // bound for every xi < 0, useful only while -xi = O(h^{2/3})
    double mxi = -xi;
    double alpha = mxi + h / (2.0 * std::sqrt(2.0 * mxi));
    return (2.0 * std::sqrt(2.0 * mxi) / h) * std::exp((4.0 / (3.0 * h)) * std::pow(alpha, 1.5));
}

std::vector<double> s0_inverse(ModelSpec model, double s) {
    if (!std::isfinite(s) || s <= 0.0) throw DomainError("s0_inverse: s must be > 0");
    if (model.kind == Model::Cubic) return {-std::pow(0.75 * s, 2.0 / 3.0)};
    if (!(s < 2.0)) throw DomainError("s0_inverse: Sine requires s in ]0, 2[");
    double u = bisect([s](double v) { return sine_S0_abs(v) - s; }, 0.0, 1.0, 1e-13);
    if (u == 0.0) return {0.0};
    return {-u, u};
}

void validate_window(ModelSpec model, const WeylWindow& window) {
    if (!(window.h > 0.0 && window.h <= 1.0))
        throw DomainError("weyl window: h must lie in ]0,1]");
    if (!std::isfinite(window.a) || !std::isfinite(window.b) || window.a <= 0.0 ||
        window.a > window.b)
        throw DomainError("weyl window: need 0 < a <= b");
    if (model.kind == Model::Sine && !(window.b < 2.0))
        throw DomainError("weyl window: Sine requires b < S0(0) = 2");
}

double weyl_predicted(ModelSpec model, const WeylWindow& window) {
    validate_window(model, window);
    if (window.a == window.b) return 0.0;
    if (model.kind == Model::Cubic) {
        double xa = std::pow(0.75 * window.a, 2.0 / 3.0);
        double xb = std::pow(0.75 * window.b, 2.0 / 3.0);
        return (xb - xa) / window.h;
    }
    double ua = std::abs(s0_inverse(model, window.a).back());
    double ub = std::abs(s0_inverse(model, window.b).back());
    return 2.0 * (ua - ub) / window.h;
}

} // namespace svlab
