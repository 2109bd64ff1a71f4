#pragma once

#include <variant>

#include "svlab/asymptotics.hpp"
#include "svlab/banded.hpp"
#include "svlab/model.hpp"

namespace svlab {

// Fourier basis e^{iky}/sqrt(2 pi), k = -n_modes..n_modes (circle).
struct FourierDisc {
    int n_modes = 0;
    bool allow_small = false; // override the n_modes >= ceil(c_modes/h) rule
};

// Uniform grid on [-half_width, half_width] with centered differences and
// Dirichlet closure (line).
struct GridDisc {
    double half_width = 3.0;
    int points = 0;
    int stencil_order = 4; // 2 or 4
    bool allow_coarse = false; // override the dy <= h/4 rule
};

using Discretization = std::variant<FourierDisc, GridDisc>;

inline double fourier_c_modes() { return 40.0; }

// Tridiagonal fiber matrix in the Fourier basis: diagonal xi + i h k,
// off-diagonals 1/2.
template <class R>
Banded<R> build_sine_matrix_t(const Problem& problem, const FourierDisc& disc);

// Banded grid matrix h D + diag(xi + y_j^2), D the centered first-derivative
// stencil of the requested order, Dirichlet closure.
template <class R>
Banded<R> build_cubic_matrix_t(const Problem& problem, const GridDisc& disc);

BandedComplexMatrix build_sine_matrix(const Problem& problem, const FourierDisc& disc);
BandedComplexMatrix build_cubic_matrix(const Problem& problem, const GridDisc& disc);

template <class R>
Banded<R> build_matrix_t(const Problem& problem, const Discretization& disc);

struct TruncationReport {
    double boundary_mass = 0.0;
    bool adequate = false;
};

// Quasimode envelope mass at the domain boundary (grid) or past the mode
// cutoff (Fourier), against the 1e-3 * e^{-S0/h} adequacy margin.
TruncationReport truncation_check(const Problem& problem, const Discretization& disc);

} // namespace svlab
