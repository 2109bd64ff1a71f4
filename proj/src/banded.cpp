#include "svlab/banded.hpp"

#include <cmath>
#include <cstdio>

namespace svlab {

template <class R>
BandLU<R>::BandLU(const Banded<R>& A)
    : n_(A.n), kl_(A.kl), kuw_(A.kl + A.ku), u_(size_t(A.n) * size_t(2 * A.kl + A.ku + 1)),
      piv_(size_t(A.n)) {
    for (int j = 0; j < n_; ++j) {
        int ilo = j - A.ku < 0 ? 0 : j - A.ku;
        int ihi = j + A.kl >= n_ ? n_ - 1 : j + A.kl;
        for (int i = ilo; i <= ihi; ++i) at(i, j) = A.get(i, j);
    }
    // near-singular steps are floored at eps^2 * scale so that solves stay
    // finite; the perturbation is far below the accuracy floor
    double pivot_floor = real_eps<R>::value * real_eps<R>::value * (A.scale > 0.0 ? A.scale : 1.0);
    if (pivot_floor == 0.0) pivot_floor = std::numeric_limits<double>::min();

    for (int k = 0; k < n_; ++k) {
        int imax = k + kl_ < n_ - 1 ? k + kl_ : n_ - 1;
        int p = k;
        double best = to_double(norm2(at(k, k)));
        for (int i = k + 1; i <= imax; ++i) {
            double m = to_double(norm2(at(i, k)));
            if (m > best) {
                best = m;
                p = i;
            }
        }
        piv_[size_t(k)] = p;
        int jhi = k + kuw_ < n_ - 1 ? k + kuw_ : n_ - 1;
        if (p != k)
            for (int j = k; j <= jhi; ++j) std::swap(at(k, j), at(p, j));

        Cplx<R>& pv = at(k, k);
        double pa = to_double(cabs(pv));
        if (pa < pivot_floor) {
            if (pa == 0.0)
                pv = Cplx<R>(R(pivot_floor));
            else
                pv = (R(pivot_floor / pa)) * pv;
        }
        for (int i = k + 1; i <= imax; ++i) {
            Cplx<R> m = at(i, k) / pv;
            at(i, k) = m; // store the multiplier in the emptied slot
            for (int j = k + 1; j <= jhi; ++j) at(i, j) -= m * at(k, j);
        }
    }
}

template <class R>
void BandLU<R>::solve(std::vector<Cplx<R>>& b) const {
    for (int k = 0; k < n_; ++k) {
        int p = piv_[size_t(k)];
        if (p != k) std::swap(b[size_t(k)], b[size_t(p)]);
        int imax = k + kl_ < n_ - 1 ? k + kl_ : n_ - 1;
        for (int i = k + 1; i <= imax; ++i) b[size_t(i)] -= at(i, k) * b[size_t(k)];
    }
    for (int j = n_ - 1; j >= 0; --j) {
        int lhi = j + kuw_ < n_ - 1 ? j + kuw_ : n_ - 1;
        Cplx<R> s = b[size_t(j)];
        for (int l = j + 1; l <= lhi; ++l) s -= at(j, l) * b[size_t(l)];
        b[size_t(j)] = s / at(j, j);
    }
}

template <class R>
void BandLU<R>::solve_herm(std::vector<Cplx<R>>& b) const {
    // y = U^{-H} b: conj(U)^T is lower triangular with bandwidth kuw
    for (int j = 0; j < n_; ++j) {
        int llo = j - kuw_ > 0 ? j - kuw_ : 0;
        Cplx<R> s = b[size_t(j)];
        for (int l = llo; l < j; ++l) s -= conj(at(l, j)) * b[size_t(l)];
        b[size_t(j)] = s / conj(at(j, j));
    }
    // x = P_0 L_0^{-H} ... P_{n-2} L_{n-2}^{-H} y
    for (int k = n_ - 1; k >= 0; --k) {
        int imax = k + kl_ < n_ - 1 ? k + kl_ : n_ - 1;
        Cplx<R> s = b[size_t(k)];
        for (int i = k + 1; i <= imax; ++i) s -= conj(at(i, k)) * b[size_t(i)];
        b[size_t(k)] = s;
        int p = piv_[size_t(k)];
        if (p != k) std::swap(b[size_t(k)], b[size_t(p)]);
    }
}

template class BandLU<double>;
template class BandLU<DD>;

void dump_banded(const BandedComplexMatrix& A, std::ostream& os) {
    char buf[128];
    for (int j = 0; j < A.n; ++j) {
        int ilo = j - A.ku < 0 ? 0 : j - A.ku;
        int ihi = j + A.kl >= A.n ? A.n - 1 : j + A.kl;
        for (int i = ilo; i <= ihi; ++i) {
            Cplx<double> v = A.get(i, j);
            std::snprintf(buf, sizeof buf, "%d %d %.17g %.17g\n", i, j, v.re, v.im);
            os << buf;
        }
    }
}

} // namespace svlab
