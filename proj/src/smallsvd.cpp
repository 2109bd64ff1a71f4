#include "svlab/smallsvd.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <numeric>

namespace svlab {

namespace {

std::atomic<Precision> g_precision{Precision::standard};

// deterministic start vectors
double rng_unit(std::uint64_t& s) {
    s ^= s >> 12;
    s ^= s << 25;
    s ^= s >> 27;
    std::uint64_t r = s * 0x2545F4914F6CDD1Dull;
    return 2.0 * (double(r >> 11) * 0x1.0p-53) - 1.0;
}

template <class R>
using Vec = std::vector<Cplx<R>>;

inline double abs_r(double x) { return std::abs(x); }
inline DD abs_r(DD x) { return abs(x); }

template <class R>
R vnorm2(const Vec<R>& v) {
    R s(0.0);
    for (const auto& z : v) s += norm2(z);
    return s;
}

template <class R>
R vnorm(const Vec<R>& v) {
    using std::sqrt;
    return sqrt(vnorm2(v));
}

template <class R>
Cplx<R> vdot(const Vec<R>& a, const Vec<R>& b) { // <a, b> = sum conj(a_i) b_i
    Cplx<R> s{};
    for (size_t i = 0; i < a.size(); ++i) s += conj(a[i]) * b[i];
    return s;
}

template <class R>
void fill_random(Vec<R>& v, std::uint64_t seed) {
    std::uint64_t s = seed * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull;
    for (auto& z : v) {
        double re = rng_unit(s);
        double im = rng_unit(s);
        z = Cplx<R>(R(re), R(im));
    }
}

// One-sided Jacobi SVD of a small m x m matrix B (column-major): returns
// B = Q diag(sigma) W^H with sigma ascending; Q overwrites B's columns
// (normalized), rotations accumulate into W.
template <class R>
void small_svd(std::vector<Cplx<R>>& B, int m, std::vector<double>& sigma,
               std::vector<Cplx<R>>& W) {
    W.assign(size_t(m) * size_t(m), Cplx<R>{});
    for (int j = 0; j < m; ++j) W[size_t(j) * m + j] = Cplx<R>(R(1.0));
    auto col = [&](std::vector<Cplx<R>>& M, int j) { return M.data() + size_t(j) * m; };
    const double eps2 = real_eps<R>::value * real_eps<R>::value;
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < m; ++p) {
            for (int q = p + 1; q < m; ++q) {
                Cplx<R>*bp = col(B, p), *bq = col(B, q);
                R app(0.0), aqq(0.0);
                Cplx<R> apq{};
                for (int i = 0; i < m; ++i) {
                    app += norm2(bp[i]);
                    aqq += norm2(bq[i]);
                    apq += conj(bp[i]) * bq[i];
                }
                double off2 = to_double(norm2(apq));
                if (off2 <= eps2 * to_double(app) * to_double(aqq) || off2 == 0.0) continue;
                rotated = true;
                R g = cabs(apq);
                Cplx<R> u = apq / g; // unit phase
                // zero the off-diagonal Gram entry: t^2 - ((app-aqq)/g) t - 1 = 0,
                // small-magnitude root
                R zeta = (app - aqq) / (R(2.0) * g);
                using std::sqrt;
                R t = (zeta >= R(0.0) ? R(-1.0) : R(1.0)) / (abs_r(zeta) + sqrt(R(1.0) + zeta * zeta));
                R c = R(1.0) / sqrt(R(1.0) + t * t);
                R s = c * t;
                Cplx<R> su = s * u, su_c = s * conj(u);
                for (int i = 0; i < m; ++i) {
                    Cplx<R> x = bp[i], y = bq[i];
                    bp[i] = c * x - su_c * y;
                    bq[i] = su * x + c * y;
                }
                Cplx<R>*wp = col(W, p), *wq = col(W, q);
                for (int i = 0; i < m; ++i) {
                    Cplx<R> x = wp[i], y = wq[i];
                    wp[i] = c * x - su_c * y;
                    wq[i] = su * x + c * y;
                }
            }
        }
        if (!rotated) break;
    }
    // column norms are the singular values; sort ascending, normalize in full
    // working precision (a rounded norm here would poison the basis)
    const size_t usm = size_t(m);
    std::vector<int> ord(usm);
    std::vector<R> nrm(usm);
    for (int j = 0; j < m; ++j) {
        R s2(0.0);
        for (int i = 0; i < m; ++i) s2 += norm2(col(B, j)[i]);
        using std::sqrt;
        nrm[size_t(j)] = sqrt(s2);
        ord[size_t(j)] = j;
    }
    std::sort(ord.begin(), ord.end(),
              [&](int a, int b) { return to_double(nrm[size_t(a)]) < to_double(nrm[size_t(b)]); });
    std::vector<Cplx<R>> Bs(B.size()), Ws(W.size());
    sigma.resize(size_t(m));
    for (int j = 0; j < m; ++j) {
        int src = ord[size_t(j)];
        sigma[size_t(j)] = to_double(nrm[size_t(src)]);
        for (int i = 0; i < m; ++i) {
            Cplx<R> b = col(B, src)[i];
            if (sigma[size_t(j)] > 0.0) b = b / nrm[size_t(src)];
            Bs[size_t(j) * m + i] = b;
            Ws[size_t(j) * m + i] = col(W, src)[i];
        }
    }
    B.swap(Bs);
    W.swap(Ws);
}

// in-place X <- X * G for tall X (n x m) and small G (m x m)
template <class R>
void apply_right(std::vector<Vec<R>>& X, const std::vector<Cplx<R>>& G, int m) {
    size_t n = X[0].size();
    const size_t uxm = size_t(m);
    std::vector<Vec<R>> out(uxm, Vec<R>(n));
    for (int j = 0; j < m; ++j)
        for (int l = 0; l < m; ++l) {
            Cplx<R> g = G[size_t(j) * m + l];
            if (to_double(norm2(g)) == 0.0) continue;
            for (size_t i = 0; i < n; ++i) out[size_t(j)][i] += g * X[size_t(l)][i];
        }
    X.swap(out);
}

// modified Gram-Schmidt (two passes) of column j against columns [0, j)
template <class R>
bool mgs_column(std::vector<Vec<R>>& V, int j) {
    for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i < j; ++i) {
            Cplx<R> p = vdot(V[size_t(i)], V[size_t(j)]);
            for (size_t r = 0; r < V[size_t(j)].size(); ++r)
                V[size_t(j)][r] -= p * V[size_t(i)][r];
        }
    }
    R nrm = vnorm(V[size_t(j)]);
    if (!(to_double(nrm) > 0.0)) return false;
    for (auto& z : V[size_t(j)]) z = z / nrm;
    return true;
}

template <class R>
SingularSpectrum solve_impl(const Banded<R>& A, int k, double tol, const SvdOptions& opts,
                            Precision kind) {
    if (k < 1) throw DomainError("smallest_singular_values: k must be >= 1");
    if (k > A.n) throw DomainError("smallest_singular_values: k exceeds the dimension");
    if (!(tol > 0.0)) throw DomainError("smallest_singular_values: tol must be > 0");

    double scale = A.scale;
    double floor = precision_floor(kind, scale);
    if (opts.hint_t0 >= 0.0 && opts.hint_t0 < floor)
        throw PrecisionError("smallest_singular_values: predicted t0 below the " +
                             std::string(to_string(kind)) + " accuracy floor");

    const int n = A.n;
    // k+1 guard value plus buffer columns; the extra buffer keeps the subspace
    // boundary clear of the degenerate twin clusters of grid fibers
    const int m = std::min(n, k + 4);
    const int nref = std::min(m, k + 1);
    const size_t un = size_t(n), um = size_t(m), unref = size_t(nref);
    BandLU<R> lu(A);

    // two-sided simultaneous iteration: U tracks left vectors, V right ones.
    // Keeping U independent of Av/t makes both residual certificates reach the
    // eps*scale floor even when t is exponentially small.
    std::vector<Vec<R>> V(um, Vec<R>(un)), U(um, Vec<R>(un));
    for (int j = 0; j < m; ++j) {
        fill_random(V[size_t(j)], std::uint64_t(j) + 1);
        if (!mgs_column(V, j)) fill_random(V[size_t(j)], std::uint64_t(j) + 101), mgs_column(V, j);
    }

    std::vector<double> tval(unref, 0.0), rres(unref, 0.0);
    bool converged = false;
    Vec<R> av(un), ahu(un);
    std::vector<Vec<R>> AV(um, Vec<R>(un));
    std::vector<Cplx<R>> B, Wrot;
    std::vector<double> sig;

    for (int it = 0; it < opts.max_iter && !converged; ++it) {
        // U <- orth(A^{-H} V), then V <- orth(A^{-1} U), columns in order
        for (int j = 0; j < m; ++j) {
            U[size_t(j)] = V[size_t(j)];
            lu.solve_herm(U[size_t(j)]);
            if (!mgs_column(U, j)) {
                fill_random(U[size_t(j)], std::uint64_t(j) * 613 + std::uint64_t(it) + 3);
                mgs_column(U, j);
            }
        }
        for (int j = 0; j < m; ++j) {
            V[size_t(j)] = U[size_t(j)];
            lu.solve(V[size_t(j)]);
            if (!mgs_column(V, j)) {
                fill_random(V[size_t(j)], std::uint64_t(j) * 977 + std::uint64_t(it) + 7);
                mgs_column(V, j);
            }
        }
        // Rayleigh-Ritz SVD projection: B = U^H (A V), B = Q diag(s) W^H;
        // rotating U <- U Q, V <- V W aligns the (u, v) pairs inside
        // near-degenerate clusters, where plain column order stalls.
        for (int j = 0; j < m; ++j) matvec(A, V[size_t(j)], AV[size_t(j)]);
        B.assign(um * um, Cplx<R>{});
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) B[size_t(j) * um + i] = vdot(U[size_t(i)], AV[size_t(j)]);
        small_svd(B, m, sig, Wrot); // B now holds Q
        apply_right(U, B, m);
        apply_right(V, Wrot, m);
        apply_right(AV, Wrot, m);

        // residual certificates on the rotated pairs
        converged = true;
        for (int j = 0; j < nref; ++j) {
            Vec<R>& w = AV[size_t(j)];
            Cplx<R> c = vdot(U[size_t(j)], w);
            R t = cabs(c);
            tval[size_t(j)] = to_double(t);
            if (to_double(t) > 0.0) {
                Cplx<R> phase = c / t;
                for (auto& z : U[size_t(j)]) z = z * phase; // align so (u|Av) = t >= 0
            }
            for (size_t rr = 0; rr < w.size(); ++rr) av[rr] = w[rr] - t * U[size_t(j)][rr];
            double r1 = to_double(vnorm(av));
            matvec_herm(A, U[size_t(j)], ahu);
            for (size_t rr = 0; rr < ahu.size(); ++rr) ahu[rr] -= t * V[size_t(j)][rr];
            double r2 = to_double(vnorm(ahu));
            double r = std::max(r1, r2);
            rres[size_t(j)] = r;
            if (j < k && r > tol * scale) converged = false;
        }
        if (std::getenv("SVLAB_SVD_TRACE") && (it < 20 || it % 500 == 0)) {
            std::fprintf(stderr, "it=%d", it);
            for (int j = 0; j < nref; ++j)
                std::fprintf(stderr, "  t%d=%.3e r%d=%.3e", j, tval[size_t(j)], j, rres[size_t(j)]);
            std::fprintf(stderr, "  target=%.3e\n", tol * scale);
        }
        if (it < 1) converged = false; // at least two sweeps
    }

    if (!converged)
        throw ConvergenceError("smallest_singular_values: residual target not met within budget");

    // sort ascending by value (GS order already matches in practice)
    std::vector<int> idx(unref);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return tval[size_t(a)] < tval[size_t(b)]; });

    SingularSpectrum out;
    out.precision_kind = kind;
    out.scale = scale;
    out.converged = true;
    out.values.resize(size_t(k));
    out.residuals.resize(size_t(k));
    out.below_floor.resize(size_t(k));
    for (int j = 0; j < k; ++j) {
        out.values[size_t(j)] = tval[size_t(idx[size_t(j)])];
        out.residuals[size_t(j)] = rres[size_t(idx[size_t(j)])];
        out.below_floor[size_t(j)] = out.values[size_t(j)] < floor ? 1 : 0;
    }
    out.next_value = nref > k ? tval[size_t(idx[size_t(k)])] : 0.0;
    return out;
}

} // namespace

void set_precision(Precision kind) { g_precision.store(kind); }
Precision current_precision() { return g_precision.load(); }

const char* to_string(Precision p) { return p == Precision::standard ? "standard" : "extended"; }

double precision_floor(Precision kind, double scale) {
    double eps = kind == Precision::standard ? real_eps<double>::value : real_eps<DD>::value;
    return 100.0 * eps * (scale > 0.0 ? scale : 1.0);
}

SingularSpectrum smallest_singular_values(const BandedComplexMatrix& A, int k, double tol,
                                          const SvdOptions& opts) {
    if (current_precision() == Precision::extended) {
        Banded<DD> B(A.n, A.kl, A.ku);
        for (size_t i = 0; i < A.a.size(); ++i)
            B.a[i] = Cplx<DD>(DD(A.a[i].re), DD(A.a[i].im));
        B.scale = A.scale;
        return solve_impl<DD>(B, k, tol, opts, Precision::extended);
    }
    return solve_impl<double>(A, k, tol, opts, Precision::standard);
}

SingularSpectrum smallest_singular_values(const Banded<DD>& A, int k, double tol,
                                          const SvdOptions& opts) {
    return solve_impl<DD>(A, k, tol, opts, Precision::extended);
}

} // namespace svlab
