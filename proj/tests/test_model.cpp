#include "doctest.h"
#include "svlab/model.hpp"

#include <cmath>

using namespace svlab;

namespace {
constexpr double kPi = 3.141592653589793238462643383279;
}

TEST_CASE("eval_model pointwise values") {
    auto v = eval_model(cubic_model(), 2.0, 0.0);
    CHECK(v.phi == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
    CHECK(v.dphi == 4.0);
    CHECK(v.d2phi == 4.0);
    CHECK(v.d3phi == 2.0);
    CHECK(v.f == doctest::Approx(8.0 / 3.0).epsilon(1e-15));

    auto s = eval_model(sine_model(), 0.0, 0.0);
    CHECK(s.phi == 0.0);
    CHECK(s.dphi == 1.0);
    CHECK(s.d2phi == 0.0);
    CHECK(s.d3phi == -1.0);
    CHECK(s.f == 0.0);

    CHECK(eval_model(cubic_model(), 1.0, -1.0).f == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("wells: closed forms and conventions") {
    auto w = wells(cubic_model(), -1.0);
    CHECK(w.y_plus == 1.0);
    CHECK(w.y_minus == -1.0);
    CHECK(w.curvature_plus == 2.0);
    CHECK(w.curvature_minus == -2.0);

    auto s = wells(sine_model(), -0.5);
    CHECK(s.y_plus == doctest::Approx(-kPi / 3.0).epsilon(1e-15));
    CHECK(s.y_minus == doctest::Approx(kPi / 3.0).epsilon(1e-15));
    CHECK(std::sin(s.y_plus) < 0.0);

    auto z = wells(sine_model(), 0.0);
    CHECK(z.y_plus == doctest::Approx(-kPi / 2.0).epsilon(1e-15));
    CHECK(z.y_minus == doctest::Approx(kPi / 2.0).epsilon(1e-15));
}

TEST_CASE("wells: domain errors outside the well regime") {
    CHECK_THROWS_AS(wells(cubic_model(), 0.0), DomainError);
    CHECK_THROWS_AS(wells(cubic_model(), 1.0), DomainError);
    CHECK_THROWS_AS(wells(sine_model(), 1.0), DomainError);
    CHECK_THROWS_AS(wells(sine_model(), -1.2), DomainError);
}

TEST_CASE("wells satisfy the critical point equation to 1e-12") {
    for (double xi : {-0.1, -0.9, -3.0}) {
        auto w = wells(cubic_model(), xi);
        Problem p{cubic_model(), xi, 0.1};
        CHECK(std::abs(symbol(p, w.y_plus, 0.0)) <= 1e-12);
        CHECK(std::abs(symbol(p, w.y_minus, 0.0)) <= 1e-12);
        CHECK(w.curvature_plus > 0.0);
        CHECK(w.curvature_minus < 0.0);
    }
    for (double xi : {-0.99, -0.5, 0.0, 0.5, 0.99}) {
        auto w = wells(sine_model(), xi);
        Problem p{sine_model(), xi, 0.1};
        CHECK(std::abs(symbol(p, w.y_plus, 0.0)) <= 1e-12);
        CHECK(std::abs(symbol(p, w.y_minus, 0.0)) <= 1e-12);
        CHECK(w.y_plus > -kPi);
        CHECK(w.y_plus < 0.0);
        CHECK(w.y_minus > 0.0);
        CHECK(w.y_minus < kPi);
    }
}

TEST_CASE("sine xi <-> -xi symmetry of curvatures") {
    for (int i = 0; i <= 20; ++i) {
        double xi = -0.95 + 0.095 * i;
        auto a = wells(sine_model(), xi);
        auto b = wells(sine_model(), -xi);
        CHECK(a.curvature_plus == doctest::Approx(-b.curvature_minus).epsilon(1e-12));
    }
}

TEST_CASE("poisson bracket modulus") {
    CHECK(poisson_bracket_modulus(cubic_model(), 1.0) == 4.0);
    CHECK(poisson_bracket_modulus(sine_model(), -kPi / 2.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(poisson_bracket_modulus(cubic_model(), 0.0) == 0.0);
    // at the wells this is 4 sqrt(|xi|) for the cubic model
    for (double xi : {-0.25, -1.0, -4.0}) {
        auto w = wells(cubic_model(), xi);
        CHECK(poisson_bracket_modulus(cubic_model(), w.y_plus) ==
              doctest::Approx(4.0 * std::sqrt(-xi)).epsilon(1e-14));
    }
}

TEST_CASE("symbol values and characteristic set") {
    Problem a{cubic_model(), -1.0, 0.1};
    CHECK(symbol(a, 1.0, 0.0) == std::complex<double>(0.0, 0.0));
    Problem b{sine_model(), 0.0, 0.1};
    CHECK(symbol(b, 0.0, 2.0) == std::complex<double>(1.0, 2.0));
    Problem c{cubic_model(), 0.0, 0.1};
    CHECK(symbol(c, 2.0, -1.0) == std::complex<double>(4.0, -1.0));

    // at eta = 0 the symbol is real and vanishes iff phi'(y) = -xi
    for (int i = 0; i < 40; ++i) {
        double y = -2.0 + 0.1 * i;
        auto z = symbol(a, y, 0.0);
        CHECK(z.imag() == 0.0);
        bool vanishes = std::abs(z) < 1e-14;
        bool critical = std::abs(y * y + a.xi) < 1e-14;
        CHECK(vanishes == critical);
    }
}
