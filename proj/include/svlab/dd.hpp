#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace svlab {

// Double-double scalar: an unevaluated sum hi + lo with |lo| <= ulp(hi)/2,
// giving ~106 bits (~31 significant digits). Error-free transforms follow
// Dekker/Knuth; products use FMA.
struct DD {
    double hi{0.0};
    double lo{0.0};

    constexpr DD() = default;
    constexpr DD(double x) : hi(x), lo(0.0) {}
    constexpr DD(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi; }
};

namespace detail {

inline DD quick_two_sum(double a, double b) {
    // requires |a| >= |b|
    double s = a + b;
    double e = b - (s - a);
    return {s, e};
}

inline DD two_sum(double a, double b) {
    double s = a + b;
    double v = s - a;
    double e = (a - (s - v)) + (b - v);
    return {s, e};
}

inline DD two_prod(double a, double b) {
    double p = a * b;
    double e = std::fma(a, b, -p);
    return {p, e};
}

} // namespace detail

inline DD operator+(DD x, DD y) {
    DD s = detail::two_sum(x.hi, y.hi);
    DD t = detail::two_sum(x.lo, y.lo);
    s.lo += t.hi;
    s = detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return detail::quick_two_sum(s.hi, s.lo);
}

inline DD operator-(DD x) { return {-x.hi, -x.lo}; }
inline DD operator-(DD x, DD y) { return x + (-y); }

inline DD operator*(DD x, DD y) {
    DD p = detail::two_prod(x.hi, y.hi);
    p.lo += x.hi * y.lo + x.lo * y.hi;
    return detail::quick_two_sum(p.hi, p.lo);
}

inline DD operator/(DD x, DD y) {
    double q1 = x.hi / y.hi;
    DD r = x - DD(q1) * y;
    double q2 = r.hi / y.hi;
    r = r - DD(q2) * y;
    double q3 = r.hi / y.hi;
    DD q = detail::quick_two_sum(q1, q2);
    return q + DD(q3);
}

inline DD& operator+=(DD& x, DD y) { return x = x + y; }
inline DD& operator-=(DD& x, DD y) { return x = x - y; }
inline DD& operator*=(DD& x, DD y) { return x = x * y; }
inline DD& operator/=(DD& x, DD y) { return x = x / y; }

inline bool operator==(DD x, DD y) { return x.hi == y.hi && x.lo == y.lo; }
inline bool operator!=(DD x, DD y) { return !(x == y); }
inline bool operator<(DD x, DD y) { return x.hi < y.hi || (x.hi == y.hi && x.lo < y.lo); }
inline bool operator>(DD x, DD y) { return y < x; }
inline bool operator<=(DD x, DD y) { return !(y < x); }
inline bool operator>=(DD x, DD y) { return !(x < y); }

inline DD abs(DD x) { return (x.hi < 0.0 || (x.hi == 0.0 && x.lo < 0.0)) ? -x : x; }

inline DD sqrt(DD x) {
    if (x.hi == 0.0 && x.lo == 0.0) return DD(0.0);
    // seed from double, one full Newton step in DD arithmetic
    DD s(std::sqrt(x.hi));
    s = DD(0.5) * (s + x / s);
    return s;
}

inline bool isfinite(DD x) { return std::isfinite(x.hi); }

inline double to_double(double x) { return x; }
inline double to_double(DD x) { return x.hi; }

// unit roundoff of the scalar kind
template <class R> struct real_eps;
template <> struct real_eps<double> {
    static constexpr double value = 2.220446049250313e-16; // 2^-52
};
template <> struct real_eps<DD> {
    static constexpr double value = 4.93038065763132e-32; // 2^-104
};

// Complex number over double or DD. std::complex<T> is unspecified for
// non-builtin T, so we carry our own minimal type.
template <class R>
struct Cplx {
    R re{};
    R im{};

    constexpr Cplx() = default;
    constexpr Cplx(R r) : re(r), im(R(0.0)) {}
    constexpr Cplx(R r, R i) : re(r), im(i) {}
};

template <class R> inline Cplx<R> operator+(Cplx<R> a, Cplx<R> b) { return {a.re + b.re, a.im + b.im}; }
template <class R> inline Cplx<R> operator-(Cplx<R> a, Cplx<R> b) { return {a.re - b.re, a.im - b.im}; }
template <class R> inline Cplx<R> operator-(Cplx<R> a) { return {-a.re, -a.im}; }
template <class R> inline Cplx<R> operator*(Cplx<R> a, Cplx<R> b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class R> inline Cplx<R> operator*(R s, Cplx<R> a) { return {s * a.re, s * a.im}; }
template <class R> inline Cplx<R> conj(Cplx<R> a) { return {a.re, -a.im}; }
template <class R> inline R norm2(Cplx<R> a) { return a.re * a.re + a.im * a.im; }
template <class R> inline R cabs(Cplx<R> a) {
    using std::sqrt;
    return sqrt(norm2(a));
}
template <class R> inline Cplx<R> operator/(Cplx<R> a, Cplx<R> b) {
    R d = norm2(b);
    Cplx<R> n = a * conj(b);
    return {n.re / d, n.im / d};
}
template <class R> inline Cplx<R> operator/(Cplx<R> a, R s) { return {a.re / s, a.im / s}; }

template <class R> inline Cplx<R>& operator+=(Cplx<R>& a, Cplx<R> b) { return a = a + b; }
template <class R> inline Cplx<R>& operator-=(Cplx<R>& a, Cplx<R> b) { return a = a - b; }

inline Cplx<double> to_cdouble(Cplx<double> z) { return z; }
inline Cplx<double> to_cdouble(Cplx<DD> z) { return {z.re.hi, z.im.hi}; }

} // namespace svlab
