#pragma once

#include <functional>
#include <vector>

namespace svlab {

// Adaptive Simpson on [a,b]; refines until the panel estimate differs by
// less than max(abs_tol, rel_tol*|whole|) spread over sub-panels.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol = 1e-12, double rel_tol = 0.0, int max_depth = 60);

// Same, with the interval pre-split at the given breakpoints (only those
// strictly inside ]a,b[ are used). Keeps every panel smooth when the
// integrand has known kinks.
double adaptive_simpson_split(const std::function<double(double)>& f, double a, double b,
                              const std::vector<double>& breakpoints,
                              double abs_tol = 1e-12, double rel_tol = 0.0, int max_depth = 60);

// Bisection for a sign change of g on [lo, hi]; requires g(lo)*g(hi) <= 0.
double bisect(const std::function<double(double)>& g, double lo, double hi, double xtol = 1e-13);

} // namespace svlab
