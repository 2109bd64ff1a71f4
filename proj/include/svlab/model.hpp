#pragma once

#include <complex>

#include "svlab/errors.hpp"

namespace svlab {

// Which model potential. Cubic lives on the real line, Sine on the circle.
enum class Model { Cubic, Sine };

struct ModelSpec {
    Model kind = Model::Cubic;
};

inline ModelSpec cubic_model() { return {Model::Cubic}; }
inline ModelSpec sine_model() { return {Model::Sine}; }

// One fiber of the transport operator: h d/dy + xi + phi'(y).
struct Problem {
    ModelSpec model;
    double xi = 0.0;
    double h = 0.1; // semiclassical parameter, in ]0,1]
};

// The two critical points of f(y,xi) = y*xi + phi(y), with curvature data
// f''(y_+) > 0 > f''(y_-).
struct WellPair {
    double y_plus = 0.0;
    double y_minus = 0.0;
    double curvature_plus = 0.0;
    double curvature_minus = 0.0;
};

struct ModelValues {
    double phi;
    double dphi;
    double d2phi;
    double d3phi;
    double f; // y*xi + phi(y)
};

// Pointwise potential data and the phase f(y,xi).
ModelValues eval_model(ModelSpec model, double y, double xi);

// True when (model, xi) admits the two wells (xi < 0 for Cubic, |xi| < 1 for Sine).
bool has_wells(ModelSpec model, double xi);

// Solves phi'(y) = -xi. Throws DomainError outside the well regime.
WellPair wells(ModelSpec model, double xi);

// |{p_xi, conj(p_xi)}(y, 0)| = 2|phi''(y)|, independent of xi.
double poisson_bracket_modulus(ModelSpec model, double y);

// p_xi(y, eta) = i*eta + xi + phi'(y).
std::complex<double> symbol(const Problem& problem, double y, double eta);

void validate_problem(const Problem& problem);

} // namespace svlab
