#pragma once

// Brute-force reference: singular values of a banded complex matrix from the
// dense Hermitian dilation [[0, A], [A^H, 0]], solved with Eigen. Independent
// of the banded-LU inverse-iteration path under test.

#include <Eigen/Dense>
#include <vector>

#include "svlab/banded.hpp"

inline std::vector<double> dilation_singular_values(const svlab::BandedComplexMatrix& A) {
    using M = Eigen::MatrixXcd;
    int n = A.n;
    M D = M::Zero(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) {
        int ilo = j - A.ku < 0 ? 0 : j - A.ku;
        int ihi = j + A.kl >= n ? n - 1 : j + A.kl;
        for (int i = ilo; i <= ihi; ++i) {
            auto v = A.get(i, j);
            D(i, n + j) = std::complex<double>(v.re, v.im);
            D(n + j, i) = std::complex<double>(v.re, -v.im);
        }
    }
    Eigen::SelfAdjointEigenSolver<M> es(D, Eigen::EigenvaluesOnly);
    std::vector<double> sv;
    for (int i = n; i < 2 * n; ++i) sv.push_back(es.eigenvalues()[i]); // nonnegative half
    return sv; // ascending
}
