#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <string>

#include "ctcr/factorization.hpp"
#include "ctcr/qpr.hpp"
#include "ctcr/topology.hpp"
#include "oracles.hpp"

using namespace ctcr;
using std::complex;

static const std::string kDataDir = CTCR_DATA_DIR;

namespace {
const Gains kPaperGains{2.0, 0.8};

std::vector<QuasiPolynomial> paper_factors() {
    auto wa = weighted_adjacency(load_topology_file(kDataDir + "/paper5.edges"));
    return build_factors(wa, kPaperGains);
}
} // namespace

TEST_CASE("centroid factor at zero delays: double root at the origin, flagged") {
    auto qp = make_factor({1.0, 0.0}, kPaperGains, true);
    auto rr = roots_in_rectangle(qp, 0.0, 0.0, {-3.0, 1.0, 3.0}, 0.02);
    REQUIRE(rr.roots.size() == 1);
    CHECK(std::abs(rr.roots[0].s) < 1e-6);
    CHECK(rr.roots[0].multiple);
}

TEST_CASE("delay-free quadratic factor roots to 1e-9") {
    auto qp = make_factor({0.0, 0.0}, kPaperGains);
    auto rr = roots_in_rectangle(qp, 0.7, 1.3, {-2.0, 0.5, 5.0}, 0.02);
    REQUIRE(rr.roots.size() == 1);   // upper member of the conjugate pair
    complex<double> want(-0.4, std::sqrt(1.84));
    CHECK(std::abs(rr.roots[0].s - want) < 1e-9);
}

TEST_CASE("every reported root satisfies the residual invariant") {
    auto factors = paper_factors();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ut(0.0, 4.0);
    for (int trial = 0; trial < 6; ++trial) {
        double t1 = ut(rng), t2 = ut(rng);
        for (const auto& qp : factors) {
            auto rr = roots_in_rectangle(qp, t1, t2, {-1.5, 0.5, 12.0}, 0.02);
            for (const auto& r : rr.roots) {
                double resid = std::abs(evaluate(qp, r.s, t1, t2));
                CHECK(resid < kReportResidual * coeff_scale(qp, r.s));
                CHECK(r.s.imag() >= 0.0);   // conjugate closure: upper set only
                // the conjugate is a root too (real coefficients)
                double cresid = std::abs(evaluate(qp, std::conj(r.s), t1, t2));
                CHECK(cresid < 10 * kReportResidual * coeff_scale(qp, r.s));
            }
        }
    }
}

TEST_CASE("root count in a rectangle matches the argument-principle winding number") {
    auto factors = paper_factors();
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ut(0.1, 3.0), ux(-1.6, -0.3), uw(0.3, 3.0);
    int done = 0;
    while (done < 20) {
        const auto& qp = factors[rng() % factors.size()];
        double t1 = ut(rng), t2 = ut(rng);
        double x0 = ux(rng), x1 = x0 + 0.7 + 0.8 * ut(rng) / 3.0;
        double y0 = 0.05, y1 = y0 + uw(rng) + 1.0;
        auto rr = roots_in_rectangle(qp, t1, t2, {x0 - 0.5, x1 + 0.5, y1 + 1.0}, 0.02);
        // Reject trials with a root hugging the contour (winding ill-posed).
        bool near_edge = false;
        int inside = 0;
        for (const auto& r : rr.roots) {
            double dx = std::min(std::abs(r.s.real() - x0), std::abs(r.s.real() - x1));
            double dy = std::min(std::abs(r.s.imag() - y0), std::abs(r.s.imag() - y1));
            if (std::min(dx, dy) < 0.05) near_edge = true;
            if (r.multiple) near_edge = true;   // winding counts multiplicity
            if (r.s.real() > x0 && r.s.real() < x1 && r.s.imag() > y0 && r.s.imag() < y1) ++inside;
        }
        if (near_edge) continue;
        int wind = oracles::winding_number(
            [&](complex<double> s) { return evaluate(qp, s, t1, t2); }, x0, x1, y0, y1);
        CHECK(wind == inside);
        ++done;
    }
}

TEST_CASE("delay-free dominant root reduces to polynomial rightmost roots") {
    auto factors = paper_factors();
    complex<double> dom = dominant_root(factors, 0.0, 0.0);
    // Oracle: max over factors of the rightmost delay-free polynomial root,
    // excluding the centroid's structural origin roots.
    double want = -1e300;
    for (const auto& qp : factors) {
        for (const auto& r : poly_roots(delay_free_polynomial(qp))) {
            if (qp.kind == FactorKind::Centroid && std::abs(r) < kStructuralRadius) continue;
            want = std::max(want, r.real());
        }
    }
    CHECK(dom.real() == doctest::Approx(want).epsilon(1e-6));
    // and numerically that is the lambda=0.38 factor pair: -D(1-lambda)/2
    CHECK(want == doctest::Approx(-0.248).epsilon(0.01));
}

TEST_CASE("dominant roots at the paper operating points") {
    auto factors = paper_factors();
    complex<double> at_a = dominant_root(factors, 0.5, 0.5);
    CHECK(std::abs(at_a.real() + 0.0610) < 0.005);

    complex<double> at_d = dominant_root(factors, 0.05, 0.8);
    complex<double> at_e = dominant_root(factors, 0.1, 3.5);
    CHECK(std::abs(at_d.real() + 0.04) < 0.01);
    CHECK(std::abs(at_e.real() + 0.05) < 0.01);
    CHECK(at_e.real() < at_d.real());   // the delay-scheduling paradox
}

TEST_CASE("empty spectrum window widens twice then fails") {
    // A factor with all window roots far left: lambda=0, huge stable part.
    auto qp = make_factor({0.0, 0.0}, Gains{100.0, 30.0});   // roots at -15 +/- ...
    std::vector<QuasiPolynomial> fs{qp};
    CHECK_THROWS_AS(dominant_root(fs, 0.0, 0.0, {-0.5, 0.2, 2.0}), NumericalError);
}

TEST_CASE("dominant surface: serial and parallel agree bit-for-bit") {
    auto factors = paper_factors();
    auto s1 = dominant_surface(factors, 0.6, 0.3, Exec::Serial);
    auto s2 = dominant_surface(factors, 0.6, 0.3, Exec::Parallel);
    REQUIRE(s1.re.size() == s2.re.size());
    for (size_t i = 0; i < s1.re.size(); ++i) {
        CHECK(std::isnan(s1.re[i]) == std::isnan(s2.re[i]));
        if (!std::isnan(s1.re[i])) CHECK(s1.re[i] == s2.re[i]);
    }
    CHECK(s1.failures == 0);
}
