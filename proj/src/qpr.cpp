#include "ctcr/qpr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ctcr/errors.hpp"

namespace ctcr {

namespace {

struct Seg {
    double x0, y0, x1, y1;
};

// Zero-level segments of a scalar field inside one grid cell, corners in
// cyclic order P0=(x,y) P1=(x+w,y) P2=(x+w,y+w) P3=(x,y+w).
int cell_segments(const double v[4], const double px[4], const double py[4], Seg out[2]) {
    auto positive = [](double a) { return a > 0.0; };
    int code = (positive(v[0]) ? 1 : 0) | (positive(v[1]) ? 2 : 0) |
               (positive(v[2]) ? 4 : 0) | (positive(v[3]) ? 8 : 0);
    if (code == 0 || code == 15) return 0;
    double ex[4], ey[4];
    bool cut[4];
    for (int e = 0; e < 4; ++e) {
        int a = e, b = (e + 1) & 3;
        cut[e] = positive(v[a]) != positive(v[b]);
        if (cut[e]) {
            double t = v[a] / (v[a] - v[b]);
            ex[e] = px[a] + t * (px[b] - px[a]);
            ey[e] = py[a] + t * (py[b] - py[a]);
        }
    }
    int edges[4], ne = 0;
    for (int e = 0; e < 4; ++e)
        if (cut[e]) edges[ne++] = e;
    if (ne == 2) {
        out[0] = {ex[edges[0]], ey[edges[0]], ex[edges[1]], ey[edges[1]]};
        return 1;
    }
    if (ne == 4) {
        // Saddle: pair edges by the sign of the cell-center average.
        double center = 0.25 * (v[0] + v[1] + v[2] + v[3]);
        bool link01 = (positive(v[0]) == positive(center));
        if (link01) {
            out[0] = {ex[0], ey[0], ex[1], ey[1]};
            out[1] = {ex[2], ey[2], ex[3], ey[3]};
        } else {
            out[0] = {ex[3], ey[3], ex[0], ey[0]};
            out[1] = {ex[1], ey[1], ex[2], ey[2]};
        }
        return 2;
    }
    return 0;
}

bool seg_intersect(const Seg& a, const Seg& b, double& x, double& y) {
    double rx = a.x1 - a.x0, ry = a.y1 - a.y0;
    double sx = b.x1 - b.x0, sy = b.y1 - b.y0;
    double denom = rx * sy - ry * sx;
    if (denom == 0.0) return false;
    double qpx = b.x0 - a.x0, qpy = b.y0 - a.y0;
    double t = (qpx * sy - qpy * sx) / denom;
    double u = (qpx * ry - qpy * rx) / denom;
    const double slack = 0.05;
    if (t < -slack || t > 1.0 + slack || u < -slack || u > 1.0 + slack) return false;
    x = a.x0 + t * rx;
    y = a.y0 + t * ry;
    return true;
}

// Evaluates q along one constant-omega row with multiplicative recurrences for
// s and the two delay exponentials (exp() is called once per row per delay).
class RowEvaluator {
public:
    RowEvaluator(const QuasiPolynomial& qp, double tau1, double tau2, double sigma0, double step)
        : qp_(qp), tau1_(tau1), tau2_(tau2), sigma0_(sigma0), step_(step),
          f1_(std::exp(-tau1 * step)), f2_(std::exp(-tau2 * step)) {}

    void fill(double omega, std::vector<Complex>& row, int count) const {
        Complex s(sigma0_, omega);
        Complex e1 = std::exp(-tau1_ * s);
        Complex e2 = std::exp(-tau2_ * s);
        for (int i = 0; i < count; ++i) {
            Complex sum = 0.0;
            for (const auto& t : qp_.terms) {
                Complex e(1.0, 0.0);
                if (t.a == 1) e = e1;
                else if (t.a == 2) e = e1 * e1;
                if (t.b == 1) e *= e2;
                else if (t.b == 2) e *= e2 * e2;
                sum += polyval(t.coeffs, s) * e;
            }
            row[static_cast<size_t>(i)] = sum;
            s += step_;
            e1 *= f1_;
            e2 *= f2_;
        }
    }

private:
    const QuasiPolynomial& qp_;
    double tau1_, tau2_, sigma0_, step_;
    double f1_, f2_;
};

struct NewtonOutcome {
    bool converged = false;
    Complex s;
    double residual = 0.0;
    bool multiple = false;
};

NewtonOutcome newton_refine(const QuasiPolynomial& qp, double tau1, double tau2, Complex seed,
                            double step) {
    NewtonOutcome out;
    Complex s = seed;
    for (int it = 0; it < 80; ++it) {
        Complex q = evaluate(qp, s, tau1, tau2);
        double scale = coeff_scale(qp, s);
        if (scale <= 0.0) return out;
        if (std::abs(q) <= kNewtonResidual * scale) {
            // Polish past the acceptance gate while the residual still drops;
            // multiplicity-2 roots reach it while |s - root| ~ sqrt(residual)
            // and need the extra steps (the structural-radius test depends on it).
            double best = std::abs(q);
            for (int extra = 0; extra < 30; ++extra) {
                Complex dq_p = evaluate_ds(qp, s, tau1, tau2);
                if (std::abs(dq_p) == 0.0) break;
                Complex s_next = s - q / dq_p;
                Complex q_next = evaluate(qp, s_next, tau1, tau2);
                if (std::abs(q_next) >= best) break;
                s = s_next;
                q = q_next;
                best = std::abs(q_next);
            }
            out.converged = true;
            out.s = s;
            out.residual = std::abs(q) / scale;
            // Multiplicity probe: near an m-fold root, q q''/q'^2 is locally
            // the constant (m-1)/m. Evaluated a step away from the root so the
            // ratio reads signal, not cancellation noise.
            Complex probe = s + Complex(0.937e-5, 0.349e-5);
            Complex qp_v = evaluate(qp, probe, tau1, tau2);
            Complex dq = evaluate_ds(qp, probe, tau1, tau2);
            Complex d2q = evaluate_ds2(qp, probe, tau1, tau2);
            if (std::norm(dq) < 1e-300) {
                out.multiple = true;
            } else {
                Complex rho = qp_v * d2q / (dq * dq);
                out.multiple = std::abs(rho - 0.5) < 0.2 || std::abs(rho - 2.0 / 3.0) < 0.05;
            }
            return out;
        }
        Complex dq = evaluate_ds(qp, s, tau1, tau2);
        if (std::abs(dq) == 0.0) return out;
        Complex delta = q / dq;
        if (std::abs(delta) > 50.0 * std::max(step, 1e-3)) return out;   // escaping the window
        s -= delta;
    }
    return out;
}

} // namespace

QprResult roots_in_rectangle(const QuasiPolynomial& qp, double tau1, double tau2,
                             const Region& region, double step) {
    if (!(step > 0.0)) throw InputError("roots_in_rectangle: step must be positive");
    double eff = std::min(step, 0.5 / std::max(tau1 + tau2, 1.0));
    QprResult result;

    const double sigma0 = region.sigma_min;
    const int cols = std::max(2, static_cast<int>(std::ceil((region.sigma_max - sigma0) / eff)) + 1);
    const double omega0 = -eff;   // one row below the real axis
    const int rows = std::max(2, static_cast<int>(std::ceil((region.omega_max - omega0) / eff)) + 1);

    RowEvaluator evaluator(qp, tau1, tau2, sigma0, eff);
    std::vector<Complex> below(static_cast<size_t>(cols)), above(static_cast<size_t>(cols));
    evaluator.fill(omega0, below, cols);

    std::vector<Complex> seeds;
    for (int j = 1; j < rows; ++j) {
        double omega_lo = omega0 + (j - 1) * eff;
        double omega_hi = omega0 + j * eff;
        evaluator.fill(omega_hi, above, cols);
        for (int i = 0; i + 1 < cols; ++i) {
            double x0 = sigma0 + i * eff;
            const Complex q00 = below[static_cast<size_t>(i)], q10 = below[static_cast<size_t>(i) + 1];
            const Complex q11 = above[static_cast<size_t>(i) + 1], q01 = above[static_cast<size_t>(i)];
            const double re[4] = {q00.real(), q10.real(), q11.real(), q01.real()};
            const double im[4] = {q00.imag(), q10.imag(), q11.imag(), q01.imag()};
            // Quick reject: all four corners on one side for either field.
            if ((re[0] > 0) == (re[1] > 0) && (re[1] > 0) == (re[2] > 0) && (re[2] > 0) == (re[3] > 0))
                continue;
            if ((im[0] > 0) == (im[1] > 0) && (im[1] > 0) == (im[2] > 0) && (im[2] > 0) == (im[3] > 0))
                continue;
            const double px[4] = {x0, x0 + eff, x0 + eff, x0};
            const double py[4] = {omega_lo, omega_lo, omega_hi, omega_hi};
            Seg rs[2], is[2];
            int nr = cell_segments(re, px, py, rs);
            int ni = cell_segments(im, px, py, is);
            bool found = false;
            for (int a = 0; a < nr; ++a)
                for (int b = 0; b < ni; ++b) {
                    double x, y;
                    if (seg_intersect(rs[a], is[b], x, y)) {
                        seeds.emplace_back(x, y);
                        found = true;
                    }
                }
            if (!found && nr > 0 && ni > 0)
                seeds.emplace_back(x0 + 0.5 * eff, 0.5 * (omega_lo + omega_hi));
        }
        std::swap(below, above);
    }

    for (Complex seed : seeds) {
        NewtonOutcome n = newton_refine(qp, tau1, tau2, seed, eff);
        if (!n.converged) {
            ++result.diag.dropped_newton;
            continue;
        }
        Complex s = n.s;
        if (s.imag() < 0.0) s = std::conj(s);                // fold to the scanned half plane
        if (std::abs(s.imag()) <= 1e-9) s = {s.real(), 0.0}; // snap real roots
        if (s.real() < region.sigma_min - 1e-12 || s.real() > region.sigma_max + 1e-12 ||
            s.imag() > region.omega_max + 1e-12)
            continue;
        if (n.residual > kReportResidual) {
            ++result.diag.dropped_residual;
            continue;
        }
        bool dup = false;
        for (auto& r : result.roots) {
            if (std::abs(r.s - s) < kRootDedupe) {
                dup = true;
                if (n.residual < r.residual) r = {s, n.residual, r.multiple || n.multiple};
                else r.multiple = r.multiple || n.multiple;
                break;
            }
        }
        if (!dup) result.roots.push_back({s, n.residual, n.multiple});
    }
    std::sort(result.roots.begin(), result.roots.end(), [](const QprRoot& a, const QprRoot& b) {
        if (a.s.real() != b.s.real()) return a.s.real() > b.s.real();
        return a.s.imag() < b.s.imag();
    });
    return result;
}

namespace {

bool structural(const QuasiPolynomial& qp, const QprRoot& r) {
    return qp.kind == FactorKind::Centroid && std::abs(r.s) < kStructuralRadius;
}

} // namespace

SpectrumEstimate dominant_root_detail(const std::vector<QuasiPolynomial>& factors,
                                      double tau1, double tau2, const Region& start, double step) {
    if (factors.empty()) throw InputError("dominant_root: empty factor list");
    Region region = start;
    int empty_widenings = 0;
    const double sigma_cap = start.sigma_max + 4.5;
    for (;;) {
        SpectrumEstimate est;
        est.region = region;
        for (const auto& qp : factors) {
            QprResult rr = roots_in_rectangle(qp, tau1, tau2, region, step);
            for (const auto& r : rr.roots)
                if (!structural(qp, r)) est.roots.push_back(r);
        }
        if (est.roots.empty()) {
            if (empty_widenings >= 2)
                throw NumericalError("empty spectrum window after widening twice");
            ++empty_widenings;
            region.sigma_min -= 1.0;
            region.sigma_max += 0.5;
            region.omega_max += 10.0;
            continue;
        }
        std::sort(est.roots.begin(), est.roots.end(), [](const QprRoot& a, const QprRoot& b) {
            if (a.s.real() != b.s.real()) return a.s.real() > b.s.real();
            return a.s.imag() < b.s.imag();
        });
        double eff = std::min(step, 0.5 / std::max(tau1 + tau2, 1.0));
        if (region.sigma_max - est.roots.front().s.real() < eff && region.sigma_max < sigma_cap) {
            region.sigma_max += 0.5;
            continue;
        }
        est.dominant = est.roots.front().s;
        return est;
    }
}

Complex dominant_root(const std::vector<QuasiPolynomial>& factors, double tau1, double tau2,
                      const Region& start, double step) {
    return dominant_root_detail(factors, tau1, tau2, start, step).dominant;
}

DominantSurface dominant_surface(const std::vector<QuasiPolynomial>& factors, double tau_max,
                                 double h, Exec exec, const Region& start, double step) {
    if (!(tau_max > 0.0) || !(h > 0.0)) throw InputError("dominant_surface: tau_max and h must be positive");
    DominantSurface surf;
    surf.tau_max = tau_max;
    surf.h = h;
    surf.nodes = static_cast<int>(std::floor(tau_max / h + 1e-9)) + 1;
    surf.re.assign(static_cast<size_t>(surf.nodes) * surf.nodes,
                   std::numeric_limits<double>::quiet_NaN());

    const int nn = surf.nodes;
    auto compute = [&](int idx) {
        int i = idx % nn, j = idx / nn;
        try {
            Complex dom = dominant_root(factors, i * h, j * h, start, step);
            surf.re[static_cast<size_t>(idx)] = dom.real();
        } catch (const NumericalError&) {
            // missing cell, reported via `failures`
        }
    };

    const int total = nn * nn;
    if (exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4)
#endif
        for (int idx = 0; idx < total; ++idx) compute(idx);
    } else {
        for (int idx = 0; idx < total; ++idx) compute(idx);
    }
    for (double v : surf.re)
        if (std::isnan(v)) ++surf.failures;
    return surf;
}

} // namespace ctcr
