#pragma once

#include <vector>

#include "ctcr/exec.hpp"
#include "ctcr/factorization.hpp"
#include "ctcr/sds.hpp"

namespace ctcr {

// Classification tolerances.
inline constexpr double kCurveTol = 1e-6;       // within this of a curve => Marginal
inline constexpr double kRtZeroTol = 1e-10;     // |Re ds/dtau| below => tangential (rt 0)
inline constexpr double kOrientScale = 1e12;    // exact-orientation coordinate scaling

/// sgn Re(ds/dtau_j) = sgn Re(-(dq/dtau_j)/(dq/ds)) at s = i*omega.
/// 0 means tangential. Throws NumericalError at a non-simple crossing
/// (dq/ds = 0).
int root_tendency(const QuasiPolynomial& qp, double tau1, double tau2, double omega,
                  int delay_index);

/// One factor bundled with everything the CTCR walk needs.
struct FactorAnalysis {
    QuasiPolynomial qp;
    DelaySpaceCurves curves;
    int delay_free_unstable = 0;
};

FactorAnalysis analyze_factor(const QuasiPolynomial& qp, double tau_max, int resolution,
                              Exec exec = Exec::Parallel);

/// NU for one factor at (tau1, tau2) by the L-path (0,0) -> (tau1,0) ->
/// (tau1,tau2): the axis leg is counted from the single-delay reduction
/// (exact magnitude quartic), the vertical leg from transversal intersections
/// with the kernel/offspring segments; each crossing adds 2*rt. The structural
/// centroid root never enters the count. Throws NumericalError
/// ("unclassifiable point") when detours keep hitting tangential crossings.
int unstable_count(const FactorAnalysis& fa, double tau1, double tau2);

enum class PointClass { Stable, Unstable, Marginal };

struct StabilityMap {
    double tau_max = 0.0;
    double h = 0.0;
    int cells = 0;                         // per axis; cell centers at (i+1/2)h
    std::vector<std::vector<int>> nu_factor;   // per factor, row-major cell grid
    std::vector<int> nu_total;
    std::vector<PointClass> cls;
    int unclassifiable = 0;

    int index(int i, int j) const { return j * cells + i; }
};

/// Composite map over [0, tau_max]^2 with cell-center classification.
/// Stable means NU_total = 0 away from every curve (the centroid factor's
/// structural root is marginal by construction).
StabilityMap stability_map(const std::vector<FactorAnalysis>& factors, double tau_max, double h,
                           Exec exec = Exec::Parallel);

/// Distance from a point to the nearest curve vertex/segment over all factors.
double distance_to_curves(const std::vector<FactorAnalysis>& factors, double tau1, double tau2);

/// Classification of one point (Marginal inside the kCurveTol band).
PointClass classify_point(const std::vector<FactorAnalysis>& factors, double tau1, double tau2,
                          int* nu_total_out = nullptr);

} // namespace ctcr
