#pragma once

#include <functional>
#include <string>
#include <vector>

#include "svlab/discretize.hpp"
#include "svlab/smallsvd.hpp"

namespace svlab {

// How campaigns size matrices and pick the scalar kind per row.
struct DiscPolicy {
    // order 2 keeps the exact checkerboard involution S P S = P^T, which lets
    // solve_fiber strip the doubled (twin) matrix values cleanly
    int grid_stencil = 2;
    double grid_points_per_h = 8.0;  // dy <= h / grid_points_per_h
    double grid_dy_curvature = 1.0;  // and dy <= grid_dy_curvature * h^2 (phase accuracy)
    double truncation_margin_log = 13.8155105579642705; // ln(1e6) of extra Agmon decay
    int max_points = 2000000;
    double solve_tol_eps = 1000.0;  // residual target = max(this, 30 n) * eps_kind * scale
    bool force_precision = false;
    Precision precision = Precision::standard;
    int jobs = 1;
    // manual discretization overrides (negative = automatic)
    int n_modes_override = -1;
    int grid_points_override = -1;
    double half_width_override = -1.0;
};

// Campaign map: one independent task per index, results written by slot.
// jobs <= 1 runs the serial reference path; jobs > 1 uses OpenMP.
void parallel_for_indexed(int n, int jobs, const std::function<void(int)>& body);

// Domain-driven discretization: Fourier mode count for the circle, certified
// half-width and dy = h/8 for the line.
Discretization auto_discretization(const Problem& problem, const DiscPolicy& policy = {});

// Assemble in the requested scalar kind and solve.
SingularSpectrum solve_fiber(const Problem& problem, const Discretization& disc, int k,
                             Precision kind, const DiscPolicy& policy = {}, double hint = -1.0);

struct TunnelingRow {
    double xi = 0.0;
    double h = 0.0;
    double t0_numeric = 0.0;
    double t0_predicted = 0.0;
    double ratio = 0.0;
    double t1_numeric = 0.0;
    double t1_predicted = 0.0;
    Regime regime_tag = Regime::nondegenerate;
    Precision precision_used = Precision::standard;
    bool failed = false;
    std::string error;
};

std::vector<TunnelingRow> tunneling_experiment(ModelSpec model, const std::vector<double>& xi_list,
                                               const std::vector<double>& h_list,
                                               const DiscPolicy& policy = {});

// Quadrature oracle |(P u_+ | u_-)| from numerically normalized quasimodes
// with smooth cut-offs of Agmon radius eta.
double overlap_estimate(const Problem& problem, double eta);

struct ScalingCheckResult {
    SingularSpectrum lhs;         // spectrum at (xi, h)
    SingularSpectrum rhs_scaled;  // |xi| * spectrum at (-1, h |xi|^{-3/2}) on the matched grid
    double max_rel_dev = 0.0;     // over the first 3 values
};

ScalingCheckResult scaling_check(double xi, double h, const DiscPolicy& policy = {});

struct ResolventRow {
    double xi = 0.0;
    double t0 = 0.0;
    double bound = 0.0;     // explicit upper bound for ||P_xi^{-1}||
    bool bound_ok = false;  // t0 >= 1/bound
    double empirical_c = 0.0; // (|xi| + h^{2/3}) / t0
    bool failed = false;
    std::string error;
};

struct ResolventTable {
    double h = 0.0;
    std::vector<ResolventRow> rows;
    double max_empirical_c = 0.0;
};

ResolventTable resolvent_experiment(ModelSpec model, double h, const std::vector<double>& xi_grid,
                                    const DiscPolicy& policy = {});

enum class WeylMode { numeric, predicted_t0 };

enum class FiberSource { svd, predicted, skipped_elliptic, failed };

struct WeylFiber {
    double xi = 0.0;
    double log_t0 = 0.0; // natural log of the value used for the decision
    bool counted = false;
    FiberSource source = FiberSource::predicted;
    Precision precision_used = Precision::standard;
    std::string error;
};

struct WeylReport {
    WeylWindow window;
    WeylMode mode = WeylMode::predicted_t0;
    bool normalize_sqrt_h = false;
    long counted = 0;
    double predicted = 0.0;
    double discrepancy = 0.0;
    long xi_grid_size = 0;
    long fallback_count = 0;  // numeric mode: fibers decided by the closed form (below floor)
    long failed_count = 0;
    long skipped_elliptic = 0;
    bool csv21_warning = false;
    double csv21_delta = 0.0;
    std::vector<WeylFiber> fibers;
};

WeylReport weyl_experiment(ModelSpec model, const WeylWindow& window, WeylMode mode,
                           const DiscPolicy& policy = {}, bool normalize_sqrt_h = false);

const char* to_string(WeylMode m);
const char* to_string(FiberSource s);

} // namespace svlab
