#pragma once

#include <complex>
#include <vector>

namespace ctcr {

using Complex = std::complex<double>;

/// Real polynomial as ascending coefficients: p(x) = c[0] + c[1]x + ...
using RealPoly = std::vector<double>;

double polyval(const RealPoly& p, double x);
Complex polyval(const RealPoly& p, Complex x);

/// Derivative coefficients.
RealPoly polyder(const RealPoly& p);

/// Degree after trimming coefficients with |c| <= tol * max|c|; -1 if all zero.
int poly_degree(const RealPoly& p, double tol = 0.0);

/// All complex roots of a real polynomial (closed forms up to degree 2,
/// companion-matrix eigenvalues above). Leading near-zero coefficients are
/// trimmed relative to the largest magnitude coefficient.
std::vector<Complex> poly_roots(const RealPoly& p);

/// Real roots only, with an imaginary-part tolerance.
std::vector<double> poly_real_roots(const RealPoly& p, double im_tol = 1e-9);

/// Determinant of the Sylvester matrix of f and g at their trimmed actual
/// degrees. Zero iff f and g share a root over C (leading coefficients
/// nonzero). Throws InputError if both are identically zero.
double sylvester_resultant(const RealPoly& f, const RealPoly& g);

/// Sylvester determinant at the formal degrees (m, n), i.e. the matrix is
/// (m+n)x(m+n) regardless of vanishing leading coefficients. Used by the SDS
/// tracer where the family fixes m = n = factor order (4x4 or 8x8).
double sylvester_resultant_formal(const RealPoly& f, const RealPoly& g, int m, int n);

/// Hadamard bound (product of row norms) of the formal Sylvester matrix; the
/// natural scale against which a near-zero determinant is judged.
double sylvester_hadamard_bound(const RealPoly& f, const RealPoly& g, int m, int n);

} // namespace ctcr
