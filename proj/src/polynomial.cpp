#include "ctcr/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "ctcr/errors.hpp"

namespace ctcr {

double polyval(const RealPoly& p, double x) {
    double v = 0.0;
    for (size_t i = p.size(); i-- > 0;) v = v * x + p[i];
    return v;
}

Complex polyval(const RealPoly& p, Complex x) {
    Complex v = 0.0;
    for (size_t i = p.size(); i-- > 0;) v = v * x + p[i];
    return v;
}

RealPoly polyder(const RealPoly& p) {
    if (p.size() <= 1) return {};
    RealPoly d(p.size() - 1);
    for (size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * static_cast<double>(i);
    return d;
}

int poly_degree(const RealPoly& p, double tol) {
    double mx = 0.0;
    for (double c : p) mx = std::max(mx, std::abs(c));
    if (mx == 0.0) return -1;
    for (size_t i = p.size(); i-- > 0;)
        if (std::abs(p[i]) > tol * mx) return static_cast<int>(i);
    return -1;
}

std::vector<Complex> poly_roots(const RealPoly& p) {
    // Trim leading coefficients that are negligible next to the largest one.
    int deg = poly_degree(p, 1e-14);
    if (deg <= 0) return {};
    if (deg == 1) return {Complex(-p[0] / p[1], 0.0)};
    if (deg == 2) {
        double a = p[2], b = p[1], c = p[0];
        double disc = b * b - 4.0 * a * c;
        if (disc >= 0.0) {
            double sq = std::sqrt(disc);
            // Stable quadratic formula: avoid cancellation on the small root.
            double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
            double r1 = q / a;
            double r2 = (q != 0.0) ? c / q : (-b / a - r1);
            return {Complex(r1, 0.0), Complex(r2, 0.0)};
        }
        double sq = std::sqrt(-disc);
        return {Complex(-b / (2 * a), sq / (2 * a)), Complex(-b / (2 * a), -sq / (2 * a))};
    }
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -p[static_cast<size_t>(i)] / p[static_cast<size_t>(deg)];
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
    std::vector<Complex> roots;
    roots.reserve(static_cast<size_t>(deg));
    for (int i = 0; i < deg; ++i) roots.push_back(es.eigenvalues()(i));
    return roots;
}

std::vector<double> poly_real_roots(const RealPoly& p, double im_tol) {
    std::vector<double> out;
    for (const Complex& r : poly_roots(p))
        if (std::abs(r.imag()) <= im_tol) out.push_back(r.real());
    std::sort(out.begin(), out.end());
    return out;
}

static double det_inplace(Eigen::MatrixXd& m) {
    // Partial-pivot LU; the matrices here are at most 8x8.
    const int n = static_cast<int>(m.rows());
    double det = 1.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(m(k, k));
        for (int i = k + 1; i < n; ++i)
            if (std::abs(m(i, k)) > best) { best = std::abs(m(i, k)); piv = i; }
        if (best == 0.0) return 0.0;
        if (piv != k) { m.row(piv).swap(m.row(k)); det = -det; }
        det *= m(k, k);
        for (int i = k + 1; i < n; ++i) {
            double f = m(i, k) / m(k, k);
            for (int j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return det;
}

static Eigen::MatrixXd sylvester_matrix(const RealPoly& f, const RealPoly& g, int m, int n) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m + n, m + n);
    auto coeff = [](const RealPoly& p, int k) {
        return (k >= 0 && k < static_cast<int>(p.size())) ? p[static_cast<size_t>(k)] : 0.0;
    };
    for (int r = 0; r < n; ++r)          // n rows of shifted f
        for (int k = 0; k <= m; ++k) M(r, r + k) = coeff(f, m - k);
    for (int r = 0; r < m; ++r)          // m rows of shifted g
        for (int k = 0; k <= n; ++k) M(n + r, r + k) = coeff(g, n - k);
    return M;
}

double sylvester_resultant(const RealPoly& f, const RealPoly& g) {
    int m = poly_degree(f);
    int n = poly_degree(g);
    if (m < 0 && n < 0) throw InputError("sylvester_resultant: degenerate point, both polynomials are zero");
    if (m < 0 || n < 0) return 0.0;   // one side identically zero: every root of the other is common
    if (m == 0 && n == 0) return 1.0; // two nonzero constants never share a root
    return sylvester_resultant_formal(f, g, std::max(m, 0), std::max(n, 0));
}

double sylvester_resultant_formal(const RealPoly& f, const RealPoly& g, int m, int n) {
    Eigen::MatrixXd M = sylvester_matrix(f, g, m, n);
    return det_inplace(M);
}

double sylvester_hadamard_bound(const RealPoly& f, const RealPoly& g, int m, int n) {
    Eigen::MatrixXd M = sylvester_matrix(f, g, m, n);
    double bound = 1.0;
    for (int r = 0; r < M.rows(); ++r) bound *= M.row(r).norm();
    return bound;
}

} // namespace ctcr
