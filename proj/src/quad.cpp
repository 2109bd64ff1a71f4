#include "svlab/quad.hpp"

#include <algorithm>
#include <cmath>

#include "svlab/errors.hpp"

namespace svlab {

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, double rel_tol, int max_depth) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double tol = std::max(abs_tol, rel_tol * std::abs(whole));
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double adaptive_simpson_split(const std::function<double(double)>& f, double a, double b,
                              const std::vector<double>& breakpoints, double abs_tol,
                              double rel_tol, int max_depth) {
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::vector<double> pts{a};
    std::vector<double> sorted = breakpoints;
    std::sort(sorted.begin(), sorted.end());
    for (double p : sorted)
        if (p > a && p < b && p != pts.back()) pts.push_back(p);
    pts.push_back(b);
    double total = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        total += adaptive_simpson(f, pts[i], pts[i + 1], abs_tol / double(pts.size()), rel_tol,
                                  max_depth);
    return sign * total;
}

double bisect(const std::function<double(double)>& g, double lo, double hi, double xtol) {
    double flo = g(lo), fhi = g(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) throw DomainError("bisect: no sign change on bracket");
    for (int i = 0; i < 200 && (hi - lo) > xtol; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = g(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace svlab
