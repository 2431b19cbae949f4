#pragma once

#include <vector>

#include "ctcr/exec.hpp"
#include "ctcr/factorization.hpp"
#include "ctcr/polynomial.hpp"

namespace ctcr {

/// A point of a building hypercurve inside the 2*pi x 2*pi building block:
/// spectral delays nu_k = tau_k * omega and the crossing frequency.
struct SdsPoint {
    double nu1 = 0.0;
    double nu2 = 0.0;
    double omega = 0.0;
};

/// Real and imaginary parts of q(i*omega) after the half-angle substitution,
/// as real polynomials in omega (denominators cleared).
struct FreqPolys {
    RealPoly f;
    RealPoly g;
};

// Tracer tolerances.
inline constexpr double kOmegaMin = 1e-6;          // below this the delay image blows up
inline constexpr double kVertexResidual = 1e-8;    // |q(i w)| < this * term_scale
inline constexpr double kOmegaAcceptRel = 1e-8;    // |f(w)| < this * sum |f_k| w^k
inline constexpr double kNuBisectTol = 1e-10;
inline constexpr double kCotBand = 0.2;            // |nu - pi| band for the cot substitution

/// Half-angle tangent substitution z_k = tan(nu_k/2): cos nu = (1-z^2)/(1+z^2),
/// sin nu = 2z/(1+z^2), cleared by (1+z1^2)^max_a (1+z2^2)^max_b.
FreqPolys frequency_polynomials(const QuasiPolynomial& qp, double z1, double z2);

/// Complementary substitution w_k = cot(nu_k/2) (cleared by (1+w^2) powers);
/// regular where the tangent form is singular (nu_k = pi).
FreqPolys frequency_polynomials_cot(const QuasiPolynomial& qp, double w1, double w2);

/// Substitution chosen per axis: cot form inside |nu - pi| < kCotBand, tan
/// form elsewhere. The two cleared forms differ by strictly positive factors,
/// so signs of the resultant are consistent across the switch.
FreqPolys frequency_polynomials_nu(const QuasiPolynomial& qp, double nu1, double nu2);

/// Sylvester determinant of (f, g) at the factor-family formal degrees
/// (4x4 for order 2, 8x8 for order 4).
double building_resultant(const QuasiPolynomial& qp, double nu1, double nu2);

struct BuildingBranch {
    std::vector<SdsPoint> points;
    bool from_transpose_pass = false;
};

struct TraceDiagnostics {
    int rejected_omega = 0;      // bracketed roots with no acceptable frequency
    int rejected_residual = 0;   // recovered points failing the vertex invariant
    int degenerate_rt = 0;       // vertices where dq/ds vanished (filled later)
};

struct BuildingCurves {
    std::vector<BuildingBranch> branches;
    TraceDiagnostics diag;
};

/// Scans nu2 slices solving for nu1 (and the transpose), bisects resultant
/// sign changes, recovers omega, validates each vertex, and stitches slices
/// into polyline branches (nearest neighbor, jump threshold 3 grid steps).
/// Transpose-pass points duplicating main-pass coverage are dropped so the
/// union covers each locus once. resolution >= 360.
BuildingCurves trace_building_curves(const QuasiPolynomial& qp, int resolution,
                                     Exec exec = Exec::Parallel);

/// Connected components of the traced point set (union-find at the linking
/// radius); the Proposition-1 branch count is checked against this.
int building_component_count(const BuildingCurves& curves, int resolution);

/// A vertex of a kernel/offspring curve in the delay plane.
struct CrossingVertex {
    double tau1 = 0.0;
    double tau2 = 0.0;
    double omega = 0.0;
    int rt1 = 0;
    int rt2 = 0;
};

struct DelayCurve {
    std::vector<CrossingVertex> points;
    int j1 = 0;   // offspring indices; (0,0) = kernel
    int j2 = 0;
};

struct DelaySpaceCurves {
    std::vector<DelayCurve> kernel;
    std::vector<DelayCurve> offspring;
    TraceDiagnostics diag;
    double tau_max = 0.0;
};

/// Back-transforms building curves to the delay plane (tau_k = nu_k / omega),
/// generates all offspring images (j1, j2) >= (0,0), != (0,0) reaching
/// [0, tau_max]^2, clips segments to the box, and attaches root tendencies to
/// every vertex. Vertices with omega < kOmegaMin are dropped and counted.
DelaySpaceCurves kernel_and_offspring(const QuasiPolynomial& qp, const BuildingCurves& curves,
                                      double tau_max);

} // namespace ctcr
