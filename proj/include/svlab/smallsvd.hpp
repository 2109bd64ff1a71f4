#pragma once

#include <vector>

#include "svlab/banded.hpp"

namespace svlab {

enum class Precision { standard, extended };

// Process-wide default scalar kind for solves on double-assembled matrices.
void set_precision(Precision kind);
Precision current_precision();

const char* to_string(Precision p);

// Accuracy floor of a scalar kind at a given matrix scale: values below it
// are indistinguishable from rounding noise.
double precision_floor(Precision kind, double scale);

struct SvdOptions {
    double hint_t0 = -1.0; // predicted smallest value; negative = no hint
    int max_iter = 5000;
};

struct SingularSpectrum {
    std::vector<double> values;    // ascending
    std::vector<double> residuals; // certified max(||Av - tu||, ||A^H u - tv||) per value
    Precision precision_kind = Precision::standard;
    double scale = 0.0;
    bool converged = false;
    std::vector<char> below_floor; // per value: t below the accuracy floor
    double next_value = 0.0;       // (k+1)-th value when available (gap certification)
};

// The k smallest singular values of A with two-sided residual certificates
// (inverse subspace iteration on (A^H A)^{-1} through a banded LU; k+1 values
// tracked internally for ordering and gap reporting).
SingularSpectrum smallest_singular_values(const BandedComplexMatrix& A, int k, double tol,
                                          const SvdOptions& opts = {});

// Extended-precision entry point for matrices assembled in double-double.
SingularSpectrum smallest_singular_values(const Banded<DD>& A, int k, double tol,
                                          const SvdOptions& opts = {});

} // namespace svlab
