#pragma once

#include <ostream>
#include <vector>

#include "svlab/dd.hpp"
#include "svlab/errors.hpp"

namespace svlab {

// Column-major band storage: entry (i,j) with j-ku <= i <= j+kl lives at
// a[j*(kl+ku+1) + (ku + i - j)]. Entries outside the band are zero.
template <class R>
struct Banded {
    int n = 0;
    int kl = 0; // lower bandwidth
    int ku = 0; // upper bandwidth
    std::vector<Cplx<R>> a;
    double scale = 0.0; // certified upper bound for the operator norm

    Banded() = default;
    Banded(int n_, int kl_, int ku_)
        : n(n_), kl(kl_), ku(ku_), a(size_t(n_) * size_t(kl_ + ku_ + 1)) {}

    int stride() const { return kl + ku + 1; }

    bool in_band(int i, int j) const {
        return i >= 0 && i < n && j >= 0 && j < n && i - j <= kl && j - i <= ku;
    }

    Cplx<R> get(int i, int j) const {
        return in_band(i, j) ? a[size_t(j) * stride() + size_t(ku + i - j)] : Cplx<R>{};
    }

    void set(int i, int j, Cplx<R> v) {
        a[size_t(j) * stride() + size_t(ku + i - j)] = v;
    }

    // max column 1-norm and the norm-product bound, both cheap and certified:
    // ||A||_2 <= sqrt(||A||_1 ||A||_inf)
    void compute_scale() {
        double n1 = 0.0;
        std::vector<double> row_sums(size_t(n), 0.0);
        for (int j = 0; j < n; ++j) {
            double cs = 0.0;
            int ilo = j - ku < 0 ? 0 : j - ku;
            int ihi = j + kl >= n ? n - 1 : j + kl;
            for (int i = ilo; i <= ihi; ++i) {
                double m = to_double(cabs(get(i, j)));
                cs += m;
                row_sums[size_t(i)] += m;
            }
            if (cs > n1) n1 = cs;
        }
        double ninf = 0.0;
        for (double r : row_sums)
            if (r > ninf) ninf = r;
        double geo = std::sqrt(n1 * ninf);
        scale = n1 > geo ? n1 : geo;
    }
};

using BandedComplexMatrix = Banded<double>;

template <class R>
Banded<R> conj_transpose(const Banded<R>& A) {
    Banded<R> B(A.n, A.ku, A.kl);
    for (int j = 0; j < A.n; ++j) {
        int ilo = j - A.ku < 0 ? 0 : j - A.ku;
        int ihi = j + A.kl >= A.n ? A.n - 1 : j + A.kl;
        for (int i = ilo; i <= ihi; ++i) B.set(j, i, conj(A.get(i, j)));
    }
    B.scale = A.scale;
    return B;
}

// y = A x
template <class R>
void matvec(const Banded<R>& A, const std::vector<Cplx<R>>& x, std::vector<Cplx<R>>& y) {
    y.assign(size_t(A.n), Cplx<R>{});
    for (int j = 0; j < A.n; ++j) {
        int ilo = j - A.ku < 0 ? 0 : j - A.ku;
        int ihi = j + A.kl >= A.n ? A.n - 1 : j + A.kl;
        Cplx<R> xj = x[size_t(j)];
        for (int i = ilo; i <= ihi; ++i) y[size_t(i)] += A.get(i, j) * xj;
    }
}

// y = A^H x
template <class R>
void matvec_herm(const Banded<R>& A, const std::vector<Cplx<R>>& x, std::vector<Cplx<R>>& y) {
    y.assign(size_t(A.n), Cplx<R>{});
    for (int j = 0; j < A.n; ++j) {
        int ilo = j - A.ku < 0 ? 0 : j - A.ku;
        int ihi = j + A.kl >= A.n ? A.n - 1 : j + A.kl;
        Cplx<R> s{};
        for (int i = ilo; i <= ihi; ++i) s += conj(A.get(i, j)) * x[size_t(i)];
        y[size_t(j)] += s;
    }
}

// LU with partial pivoting for band matrices; fill widens the upper band to
// kl+ku. Solves A x = b and A^H x = b from the same factorization.
template <class R>
class BandLU {
  public:
    explicit BandLU(const Banded<R>& A);

    void solve(std::vector<Cplx<R>>& b) const;      // A x = b, in place
    void solve_herm(std::vector<Cplx<R>>& b) const; // A^H x = b, in place

  private:
    int n_, kl_, kuw_;
    std::vector<Cplx<R>> u_;   // (kl + kuw + 1) x n band of U rows + L multipliers
    std::vector<int> piv_;     // pivot row chosen at step k (k <= piv_[k] <= k+kl)
    int stride() const { return kl_ + kuw_ + 1; }
    Cplx<R>& at(int i, int j) { return u_[size_t(j) * stride() + size_t(kuw_ + i - j)]; }
    const Cplx<R>& at(int i, int j) const {
        return u_[size_t(j) * stride() + size_t(kuw_ + i - j)];
    }
};

// Debug dump: one `row col re im` line per stored entry, 17 significant digits.
void dump_banded(const BandedComplexMatrix& A, std::ostream& os);

} // namespace svlab
