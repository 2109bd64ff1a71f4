#pragma once

#include <vector>

#include "svlab/model.hpp"

namespace svlab {

enum class Regime { elliptic, boundary, degenerate, nondegenerate, large_xi, kernel };
enum class SignTag { positive, negative, not_applicable };
enum class Witten { Qplus, Qminus };

// Arc orientation on the circle; ignored on the line.
enum class Segment { forward, backward };

const char* to_string(Regime r);
const char* to_string(SignTag s);

// Leading-order prediction for the smallest singular value (or a bound),
// with the regime tag and the magnitude of the expected relative error.
struct Prediction {
    double value = 0.0;
    double log_value = 0.0; // natural log; -inf for the kernel fiber
    SignTag sign = SignTag::not_applicable;
    Regime regime = Regime::nondegenerate;
    double relative_error_scale = 0.0;
};

struct WeylWindow {
    double a = 0.0;
    double b = 0.0;
    double h = 0.1;
};

// Cut constants for the regime classifier (in units of h^(2/3) where noted).
struct RegimeCuts {
    double elliptic_c0 = 1.0;      // elliptic when degeneracy distance <= elliptic_c0 * h^(2/3)
    double boundary_c = 2.0;       // boundary strip up to boundary_c * h^(2/3)
    double compact_threshold = 0.25; // nondegenerate once the distance exceeds this
    double large_xi_cut = 4.0;     // Cubic only: large_xi when -xi >= this
    double csv21_c = 1.0;          // gate h <= delta^(3/2) / (c * log(1/delta))
};

// Lithner-Agmon distance: integral of |xi + phi'(y)| over the chosen segment,
// by adaptive quadrature split at the zeros of the weight (abs tol 1e-12).
double agmon_distance(const Problem& problem, double y1, double y2,
                      Segment segment = Segment::forward);

// S0(xi): LA distance between the two wells (geodesic on the circle).
double action_S0(ModelSpec model, double xi);

// The two competing arc distances on the cut circle J = ]y_- - 2pi, y_-[.
struct DJPair {
    double d_short; // arc through 0
    double d_long;  // arc through -pi
};
DJPair dJ_distances(double xi);

// Tunneling coefficient |m_+| at leading order, all regimes.
Prediction m_plus(const Problem& problem);

// Eigenvalues of the quadratic (harmonic) model of Q_+/Q_- at the two wells,
// k per well, merged and sorted (2k values).
std::vector<double> harmonic_levels(const Problem& problem, Witten which, int k);

// Sharp harmonic-scale prediction sqrt(2 h min|f''(y_pm)|) for t_1 when wells
// exist; (|xi| + h^(2/3))/C0 otherwise.
double t1_lower_bound(const Problem& problem);

// Explicit upper bound for the resolvent norm of the Cubic fiber (optimized
// exponential-weight bound).
double resolvent_bound(double xi, double h);

// (xi, h) classification with documented cut constants.
Regime regime(const Problem& problem, const RegimeCuts& cuts = {});

// Preimage S0^{-1}(s): one value (Cubic) or a symmetric pair (Sine).
std::vector<double> s0_inverse(ModelSpec model, double s);

// Predicted count L(S0^{-1}([a,b]))/h for the window [e^{-b/h}, e^{-a/h}].
double weyl_predicted(ModelSpec model, const WeylWindow& window);

void validate_window(ModelSpec model, const WeylWindow& window);

// S0(|xi|) on the circle, closed form (helper for bisection/counting).
double sine_S0_abs(double abs_xi);

inline double default_t1_c0() { return 3.0; }

} // namespace svlab
