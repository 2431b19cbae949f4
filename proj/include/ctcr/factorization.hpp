#pragma once

#include <complex>
#include <string>
#include <vector>

#include "ctcr/errors.hpp"
#include "ctcr/polynomial.hpp"
#include "ctcr/topology.hpp"

namespace ctcr {

/// PD gains of the consensus protocol; both strictly positive.
struct Gains {
    double p = 0.0;   // proportional, 1/s^2
    double d = 0.0;   // derivative, 1/s

    Gains() = default;
    Gains(double p_, double d_);
};

enum class FactorKind { Centroid, RealDisagreement, ComplexDisagreement };

/// One exponential term p(s) * e^{-(a*tau1 + b*tau2) s}.
struct QpTerm {
    int a = 0;        // tau1 multiplicity, 0..2
    int b = 0;        // tau2 multiplicity, 0..2
    RealPoly coeffs;  // ascending powers of s
};

/// One factor q_j(s, tau1, tau2) of the characteristic equation. Second order
/// for real eigenvalues, fourth order for conjugate pairs; coefficients are
/// always real (complex lambda enters via 2*Re(lambda) and |lambda|^2).
struct QuasiPolynomial {
    std::vector<QpTerm> terms;
    std::complex<double> lambda;
    FactorKind kind = FactorKind::RealDisagreement;
    int order = 2;
    double p = 0.0;   // gains the factor was built with
    double d = 0.0;

    int max_a() const;
    int max_b() const;
};

// tol_margin for the delay-free root classification.
inline constexpr double kMarginTol = 1e-9;

/// One factor per real eigenvalue, one per conjugate pair; the lambda=1
/// factor(s) tagged Centroid (lambda snapped to exactly 1). Throws InputError
/// if the adjacency was flagged defective.
std::vector<QuasiPolynomial> build_factors(const WeightedAdjacency& adjacency, const Gains& gains);

/// Factor for a single eigenvalue (real: order 2; else: order 4 via the
/// conjugate-pair product). Exposed for synthetic-spectrum tests.
QuasiPolynomial make_factor(std::complex<double> lambda, const Gains& gains, bool centroid = false);

/// q(s) at the given delays.
Complex evaluate(const QuasiPolynomial& qp, Complex s, double tau1, double tau2);

/// Analytic partial derivatives of the exponential-polynomial form.
Complex evaluate_ds(const QuasiPolynomial& qp, Complex s, double tau1, double tau2);
Complex evaluate_ds2(const QuasiPolynomial& qp, Complex s, double tau1, double tau2);
Complex evaluate_dtau(const QuasiPolynomial& qp, Complex s, double tau1, double tau2, int delay_index);

/// Sum of |p_{a,b}(s)| — the residual scale of the curve-vertex invariant.
double term_scale(const QuasiPolynomial& qp, Complex s);

/// Sum over terms of sum_k |c_k| |s|^k: never vanishes (the (0,0) constant
/// term is P-positive), so relative Newton gates stay meaningful at roots of
/// individual term polynomials.
double coeff_scale(const QuasiPolynomial& qp, Complex s);

/// Ordinary polynomial q(s, 0, 0) (all delay exponentials = 1).
RealPoly delay_free_polynomial(const QuasiPolynomial& qp);

struct DelayFreeCount {
    int unstable = 0;   // Re > tol_margin
    int marginal = 0;   // |Re| <= tol_margin
};

/// Root counts of the delay-free polynomial; the CTCR sweep anchor.
DelayFreeCount delay_free_unstable_count(const QuasiPolynomial& qp);

/// JSON round-trip (coefficient lists + exponent pairs) for debugging and
/// cross-language tests.
std::string to_json(const QuasiPolynomial& qp);
std::string to_json(const std::vector<QuasiPolynomial>& factors);
QuasiPolynomial factor_from_json(const std::string& json_text);

} // namespace ctcr
