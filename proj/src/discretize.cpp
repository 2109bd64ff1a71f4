#include "svlab/discretize.hpp"

#include <cmath>

namespace svlab {

template <class R>
Banded<R> build_sine_matrix_t(const Problem& problem, const FourierDisc& disc) {
    validate_problem(problem);
    if (problem.model.kind != Model::Sine)
        throw DomainError("build_sine_matrix: Sine model required");
    int min_modes = int(std::ceil(fourier_c_modes() / problem.h));
    if (disc.n_modes < min_modes && !disc.allow_small)
        throw SizeError("build_sine_matrix: n_modes below ceil(c_modes/h); set allow_small to override");
    if (disc.n_modes < 0) throw SizeError("build_sine_matrix: n_modes must be >= 0");

    int N = disc.n_modes;
    int n = 2 * N + 1;
    Banded<R> A(n, 1, 1);
    R half(0.5);
    for (int r = 0; r < n; ++r) {
        int k = r - N;
        A.set(r, r, Cplx<R>(R(problem.xi), R(problem.h) * R(double(k))));
        if (r + 1 < n) {
            A.set(r, r + 1, Cplx<R>(half));
            A.set(r + 1, r, Cplx<R>(half));
        }
    }
    A.compute_scale();
    return A;
}

template <class R>
Banded<R> build_cubic_matrix_t(const Problem& problem, const GridDisc& disc) {
    validate_problem(problem);
    if (problem.model.kind != Model::Cubic)
        throw DomainError("build_cubic_matrix: Cubic model required");
    if (disc.points < 16) throw SizeError("build_cubic_matrix: need at least 16 grid points");
    if (disc.stencil_order != 2 && disc.stencil_order != 4)
        throw SizeError("build_cubic_matrix: stencil_order must be 2 or 4");
    if (!(disc.half_width > std::max(1.0, std::sqrt(std::abs(problem.xi))) + 1.0))
        throw SizeError("build_cubic_matrix: half_width too small for this xi");
    double dy = 2.0 * disc.half_width / double(disc.points - 1);
    if (dy > problem.h / 4.0 && !disc.allow_coarse)
        throw SizeError("build_cubic_matrix: dy > h/4; refine the grid or set allow_coarse");

    int n = disc.points;
    int bw = disc.stencil_order == 2 ? 1 : 2;
    Banded<R> A(n, bw, bw);
    R L(disc.half_width), step(dy), xi(problem.xi), h(problem.h);
    if (disc.stencil_order == 2) {
        R c1 = h / (R(2.0) * step);
        for (int j = 0; j < n; ++j) {
            R y = -L + R(double(j)) * step;
            A.set(j, j, Cplx<R>(xi + y * y));
            if (j + 1 < n) {
                A.set(j, j + 1, Cplx<R>(c1));
                A.set(j + 1, j, Cplx<R>(-c1));
            }
        }
    } else {
        R c1 = (R(2.0) / R(3.0)) * (h / step);
        R c2 = (R(1.0) / R(12.0)) * (h / step);
        for (int j = 0; j < n; ++j) {
            R y = -L + R(double(j)) * step;
            A.set(j, j, Cplx<R>(xi + y * y));
            if (j + 1 < n) {
                A.set(j, j + 1, Cplx<R>(c1));
                A.set(j + 1, j, Cplx<R>(-c1));
            }
            if (j + 2 < n) {
                A.set(j, j + 2, Cplx<R>(-c2));
                A.set(j + 2, j, Cplx<R>(c2));
            }
        }
    }
    A.compute_scale();
    return A;
}

template <class R>
Banded<R> build_matrix_t(const Problem& problem, const Discretization& disc) {
    if (std::holds_alternative<FourierDisc>(disc))
        return build_sine_matrix_t<R>(problem, std::get<FourierDisc>(disc));
    return build_cubic_matrix_t<R>(problem, std::get<GridDisc>(disc));
}

template Banded<double> build_sine_matrix_t<double>(const Problem&, const FourierDisc&);
template Banded<DD> build_sine_matrix_t<DD>(const Problem&, const FourierDisc&);
template Banded<double> build_cubic_matrix_t<double>(const Problem&, const GridDisc&);
template Banded<DD> build_cubic_matrix_t<DD>(const Problem&, const GridDisc&);
template Banded<double> build_matrix_t<double>(const Problem&, const Discretization&);
template Banded<DD> build_matrix_t<DD>(const Problem&, const Discretization&);

BandedComplexMatrix build_sine_matrix(const Problem& problem, const FourierDisc& disc) {
    return build_sine_matrix_t<double>(problem, disc);
}

BandedComplexMatrix build_cubic_matrix(const Problem& problem, const GridDisc& disc) {
    return build_cubic_matrix_t<double>(problem, disc);
}

TruncationReport truncation_check(const Problem& problem, const Discretization& disc) {
    validate_problem(problem);
    if (!has_wells(problem.model, problem.xi))
        throw DomainError("truncation_check: wells required");
    WellPair w = wells(problem.model, problem.xi);
    double s0 = action_S0(problem.model, problem.xi);

    TruncationReport rep{};
    if (std::holds_alternative<GridDisc>(disc)) {
        const auto& g = std::get<GridDisc>(disc);
        double dp = agmon_distance(problem, w.y_plus, g.half_width);
        double dm = agmon_distance(problem, -g.half_width, w.y_minus);
        rep.boundary_mass = std::exp(-std::min(dp, dm) / problem.h);
    } else {
        const auto& fd = std::get<FourierDisc>(disc);
        // Gaussian Fourier tail of the wider quasimode: coefficients decay
        // like exp(-h k^2 / (2 lambda_max))
        double lmax = std::max(w.curvature_plus, -w.curvature_minus);
        double kN = double(fd.n_modes);
        rep.boundary_mass = std::exp(-problem.h * kN * kN / (2.0 * lmax));
    }
    rep.adequate = rep.boundary_mass <= 1e-3 * std::exp(-s0 / problem.h);
    return rep;
}

} // namespace svlab
