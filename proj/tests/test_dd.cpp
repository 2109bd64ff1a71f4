#include "doctest.h"
#include "svlab/dd.hpp"

#include <cmath>

using namespace svlab;

TEST_CASE("double-double keeps bits a double loses") {
    DD tiny(1e-20);
    DD s = DD(1.0) + tiny;
    DD back = s - DD(1.0);
    CHECK(back.hi == doctest::Approx(1e-20).epsilon(1e-14));
    CHECK(to_double(s) == 1.0); // invisible at double precision
}

TEST_CASE("dd arithmetic against long double") {
    long double xs[] = {0.1L, -3.7L, 12345.678L, 1.0L / 3.0L};
    long double ys[] = {7.3L, 0.0625L, -0.9L, 2.0L};
    for (long double xl : xs) {
        for (long double yl : ys) {
            DD x{double(xl)}, y{double(yl)};
            long double xr = double(xl), yr = double(yl);
            CHECK(to_double((x + y)) == doctest::Approx(double(xr + yr)).epsilon(1e-15));
            CHECK(to_double((x * y)) == doctest::Approx(double(xr * yr)).epsilon(1e-15));
            CHECK(to_double((x / y)) == doctest::Approx(double(xr / yr)).epsilon(1e-15));
        }
    }
}

TEST_CASE("dd division and sqrt round-trip at ~1e-30") {
    DD a(3.141592653589793, 1.2246467991473532e-16);
    DD b(2.718281828459045);
    DD q = a / b;
    DD r = q * b - a;
    CHECK(std::abs(to_double(r)) < 1e-30);

    DD s = sqrt(DD(2.0));
    DD err = s * s - DD(2.0);
    CHECK(std::abs(to_double(err)) < 1e-30);
}

TEST_CASE("dd comparisons and abs") {
    CHECK(DD(1.0, -1e-20) < DD(1.0));
    CHECK(DD(2.0) > DD(1.0));
    CHECK(abs(DD(-3.0)) == DD(3.0));
    CHECK(DD(1.5) == DD(1.5, 0.0));
}

TEST_CASE("complex arithmetic in both scalar kinds") {
    Cplx<double> a{1.0, 2.0}, b{3.0, 4.0};
    Cplx<double> p = a * b;
    CHECK(p.re == -5.0);
    CHECK(p.im == 10.0);
    Cplx<double> q = p / b;
    CHECK(q.re == doctest::Approx(1.0));
    CHECK(q.im == doctest::Approx(2.0));

    Cplx<DD> ad{DD(1.0), DD(2.0)}, bd{DD(3.0), DD(4.0)};
    Cplx<DD> pd = ad * bd;
    CHECK(to_double(pd.re) == -5.0);
    CHECK(to_double(pd.im) == 10.0);
    CHECK(to_double(cabs(ad)) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
}
