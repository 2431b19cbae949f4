#include "doctest.h"

#include <cmath>

#include "ctcr/errors.hpp"
#include "ctcr/polynomial.hpp"

using namespace ctcr;

TEST_CASE("polyval and derivative") {
    RealPoly p{2.0, 0.8, 1.0};   // 2 + 0.8 s + s^2
    CHECK(polyval(p, 0.0) == 2.0);
    CHECK(polyval(p, 2.0) == doctest::Approx(7.6));
    Complex v = polyval(p, Complex(1.0, 1.0));
    CHECK(v.real() == doctest::Approx(2.8));
    CHECK(v.imag() == doctest::Approx(2.8));
    RealPoly d = polyder(p);
    REQUIRE(d.size() == 2);
    CHECK(d[0] == 0.8);
    CHECK(d[1] == 2.0);
}

TEST_CASE("quadratic roots, real and conjugate") {
    auto r = poly_roots({2.0, 0.8, 1.0});
    REQUIRE(r.size() == 2);
    // -0.4 +/- i sqrt(1.84)
    double im = std::sqrt(1.84);
    CHECK(std::abs(r[0].real() + 0.4) < 1e-14);
    CHECK(std::abs(std::abs(r[0].imag()) - im) < 1e-14);
    CHECK(std::abs(r[0] - std::conj(r[1])) < 1e-14);

    auto rr = poly_real_roots({-1.0, 0.0, 1.0});
    REQUIRE(rr.size() == 2);
    CHECK(rr[0] == doctest::Approx(-1.0));
    CHECK(rr[1] == doctest::Approx(1.0));
}

TEST_CASE("quartic roots via companion matrix") {
    // (x^2 - 2)(x^2 + 3) = x^4 + x^2 - 6
    auto r = poly_roots({-6.0, 0.0, 1.0, 0.0, 1.0});
    REQUIRE(r.size() == 4);
    int real_count = 0, imag_count = 0;
    for (auto z : r) {
        if (std::abs(z.imag()) < 1e-10) {
            ++real_count;
            CHECK(std::abs(std::abs(z.real()) - std::sqrt(2.0)) < 1e-10);
        } else {
            ++imag_count;
            CHECK(std::abs(z.real()) < 1e-10);
            CHECK(std::abs(std::abs(z.imag()) - std::sqrt(3.0)) < 1e-10);
        }
    }
    CHECK(real_count == 2);
    CHECK(imag_count == 2);
}

TEST_CASE("resultant: shared root gives zero") {
    // f = w^2 - 1, g = w - 1 share w = 1
    CHECK(sylvester_resultant({-1.0, 0.0, 1.0}, {-1.0, 1.0}) == doctest::Approx(0.0));
}

TEST_CASE("resultant of quadratic and linear equals f at g's root") {
    // f = w^2 + 1, g = w - 3: resultant = f(3) = 10
    CHECK(sylvester_resultant({1.0, 0.0, 1.0}, {-3.0, 1.0}) == doctest::Approx(10.0));
}

TEST_CASE("resultant: both zero polynomials is a degenerate point") {
    CHECK_THROWS_AS(sylvester_resultant({0.0, 0.0}, {0.0}), InputError);
}

TEST_CASE("formal-degree resultant keeps the common-root zero set") {
    // Same pair as above embedded at formal degrees (2,2): nonzero iff no
    // common root, zero at one.
    RealPoly f{-1.0, 0.0, 1.0};
    RealPoly g{-1.0, 1.0, 0.0};
    CHECK(std::abs(sylvester_resultant_formal(f, g, 2, 2)) < 1e-14);
    RealPoly g2{-3.0, 1.0, 0.0};
    CHECK(sylvester_resultant_formal(f, g2, 2, 2) != 0.0);
    CHECK(sylvester_hadamard_bound(f, g2, 2, 2) > 0.0);
}
