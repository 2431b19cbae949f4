#pragma once

#include <vector>

#include "ctcr/exec.hpp"
#include "ctcr/factorization.hpp"

namespace ctcr {

/// Complex scan window [sigma_min, sigma_max] x [0, omega_max]. Only the upper
/// half plane is scanned; conjugate roots are implied. Internally the grid
/// extends one row below omega = 0 so real roots sit inside a cell instead of
/// on a degenerate boundary line (Im q vanishes identically on the real axis).
struct Region {
    double sigma_min = -2.0;
    double sigma_max = 0.5;
    double omega_max = 20.0;
};

struct QprRoot {
    Complex s;
    double residual = 0.0;      // |q(s)| / term_scale(s)
    bool multiple = false;      // Newton convergence-rate flag (multiplicity >= 2)
};

struct QprDiagnostics {
    int dropped_newton = 0;     // candidates whose refinement diverged
    int dropped_residual = 0;   // refined points that failed the residual gate
};

struct QprResult {
    std::vector<QprRoot> roots;
    QprDiagnostics diag;
};

// Residual gates and dedupe spacing.
inline constexpr double kNewtonResidual = 1e-12;
inline constexpr double kReportResidual = 1e-9;
inline constexpr double kRootDedupe = 1e-6;
inline constexpr double kStructuralRadius = 1e-6;   // centroid origin-root exclusion ball

/// Marching-squares scan of Re q = 0 and Im q = 0 over the window, zero-curve
/// intersection seeding, Newton refinement. The step is clamped to
/// 0.5/max(tau1+tau2, 1) so the delay-exponential phase stays resolved.
QprResult roots_in_rectangle(const QuasiPolynomial& qp, double tau1, double tau2,
                             const Region& region, double step);

struct SpectrumEstimate {
    Region region;
    std::vector<QprRoot> roots;   // union over factors, deduplicated
    Complex dominant;             // rightmost, structural centroid root excluded
};

/// Rightmost root over all factors inside an adaptive window: the right edge
/// widens by +0.5 while the rightmost root hugs it; an empty window widens
/// twice before NumericalError("empty spectrum window"). Roots of Centroid
/// factors within kStructuralRadius of the origin are excluded.
SpectrumEstimate dominant_root_detail(const std::vector<QuasiPolynomial>& factors,
                                      double tau1, double tau2,
                                      const Region& start = {}, double step = 0.02);
Complex dominant_root(const std::vector<QuasiPolynomial>& factors, double tau1, double tau2,
                      const Region& start = {}, double step = 0.02);

/// Re(s_dom) sampled at grid nodes (i*h, j*h), i,j = 0..floor(tau_max/h).
/// Per-node failures become NaN cells, not errors.
struct DominantSurface {
    double tau_max = 0.0;
    double h = 0.0;
    int nodes = 0;                 // per axis
    std::vector<double> re;        // row-major, re[j*nodes + i] at (i*h, j*h)
    int failures = 0;

    double at(int i, int j) const { return re[static_cast<size_t>(j) * nodes + i]; }
};

DominantSurface dominant_surface(const std::vector<QuasiPolynomial>& factors, double tau_max,
                                 double h, Exec exec = Exec::Parallel,
                                 const Region& start = {}, double step = 0.02);

} // namespace ctcr
