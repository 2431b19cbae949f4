#include "ctcr/sds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>

#include "ctcr/ctcr_map.hpp"
#include "ctcr/errors.hpp"

namespace ctcr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPi = std::numbers::pi;

Complex ipow_small(Complex base, int e) {
    Complex r(1.0, 0.0);
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

struct AxisSub {
    bool cot = false;
    double t = 0.0;   // z = tan(nu/2) or w = cot(nu/2)
};

AxisSub axis_sub_for(double nu) {
    if (std::abs(nu - kPi) < kCotBand)
        return {true, std::cos(0.5 * nu) / std::sin(0.5 * nu)};
    return {false, std::tan(0.5 * nu)};
}

// Cleared exponential factor for one axis:
//   tan form: (1+z^2)^amax e^{-i a nu} = (1-iz)^{amax+a} (1+iz)^{amax-a}
//   cot form: (1+w^2)^amax e^{-i a nu} = (-1)^a (1+iw)^{amax+a} (1-iw)^{amax-a}
Complex axis_factor(const AxisSub& sub, int a, int amax) {
    if (!sub.cot) {
        Complex minus(1.0, -sub.t), plus(1.0, sub.t);
        return ipow_small(minus, amax + a) * ipow_small(plus, amax - a);
    }
    Complex plus(1.0, sub.t), minus(1.0, -sub.t);
    Complex r = ipow_small(plus, amax + a) * ipow_small(minus, amax - a);
    return (a & 1) ? -r : r;
}

FreqPolys freq_polys_impl(const QuasiPolynomial& qp, const AxisSub& s1, const AxisSub& s2) {
    const int amax = qp.max_a(), bmax = qp.max_b();
    std::vector<Complex> c(static_cast<size_t>(qp.order) + 1, Complex(0.0, 0.0));
    const Complex img(0.0, 1.0);
    for (const auto& t : qp.terms) {
        Complex u = axis_factor(s1, t.a, amax) * axis_factor(s2, t.b, bmax);
        Complex ik(1.0, 0.0);
        for (size_t k = 0; k < t.coeffs.size(); ++k) {
            c[k] += t.coeffs[k] * ik * u;
            ik *= img;
        }
    }
    FreqPolys fg;
    fg.f.resize(c.size());
    fg.g.resize(c.size());
    for (size_t k = 0; k < c.size(); ++k) {
        fg.f[k] = c[k].real();
        fg.g[k] = c[k].imag();
    }
    return fg;
}

} // namespace

FreqPolys frequency_polynomials(const QuasiPolynomial& qp, double z1, double z2) {
    return freq_polys_impl(qp, {false, z1}, {false, z2});
}

FreqPolys frequency_polynomials_cot(const QuasiPolynomial& qp, double w1, double w2) {
    return freq_polys_impl(qp, {true, w1}, {true, w2});
}

FreqPolys frequency_polynomials_nu(const QuasiPolynomial& qp, double nu1, double nu2) {
    return freq_polys_impl(qp, axis_sub_for(nu1), axis_sub_for(nu2));
}

double building_resultant(const QuasiPolynomial& qp, double nu1, double nu2) {
    FreqPolys fg = frequency_polynomials_nu(qp, nu1, nu2);
    return sylvester_resultant_formal(fg.f, fg.g, qp.order, qp.order);
}

namespace {

/// Common frequency of f and g: real roots of the lower-degree polynomial
/// (normally g), screened by the magnitude of the other one.
bool recover_omega(const FreqPolys& fg, double& omega_out) {
    const double fmax = *std::max_element(fg.f.begin(), fg.f.end(),
                                          [](double a, double b) { return std::abs(a) < std::abs(b); });
    const double gmax = *std::max_element(fg.g.begin(), fg.g.end(),
                                          [](double a, double b) { return std::abs(a) < std::abs(b); });
    const double scale = std::max(std::abs(fmax), std::abs(gmax));
    if (scale == 0.0) return false;
    const RealPoly* source = &fg.g;
    const RealPoly* selector = &fg.f;
    if (poly_degree(fg.g, 1e-13) < 0)
        std::swap(source, selector);   // g degenerated; use f's roots, screen with g
    if (poly_degree(*source, 1e-13) < 0) return false;
    double best = -1.0, best_sel = 0.0;
    for (double w : poly_real_roots(*source, 1e-4)) {
        if (w <= kOmegaMin) continue;
        double sel = std::abs(polyval(*selector, w));
        if (best < 0.0 || sel < best_sel) {
            best = w;
            best_sel = sel;
        }
    }
    if (best < 0.0) return false;
    double sel_scale = 0.0, pw = 1.0;
    for (double ck : *selector) {
        sel_scale += std::abs(ck) * pw;
        pw *= best;
    }
    if (best_sel >= kOmegaAcceptRel * std::max(sel_scale, 1e-300)) return false;
    omega_out = best;
    return true;
}

struct SliceResult {
    std::vector<SdsPoint> points;
    int rejected_omega = 0;
    int rejected_residual = 0;
};

/// All accepted curve points on one scan line. transpose=false scans nu2 and
/// solves along nu1; transpose=true the other way.
SliceResult scan_slice(const QuasiPolynomial& qp, double nu_scan, bool transpose, int res) {
    SliceResult out;
    const double delta = kTwoPi / res;
    auto assemble = [&](double nu_solve) {
        return transpose ? std::pair<double, double>(nu_scan, nu_solve)
                         : std::pair<double, double>(nu_solve, nu_scan);
    };
    std::vector<double> F(static_cast<size_t>(res) + 1);
    for (int k = 0; k <= res; ++k) {
        auto [n1, n2] = assemble(k * delta);
        F[static_cast<size_t>(k)] = building_resultant(qp, n1, n2);
    }
    auto try_accept = [&](double nu_solve) {
        if (nu_solve < 1e-9 || nu_solve > kTwoPi - 1e-9) return;   // strict kernel bound
        auto [n1, n2] = assemble(nu_solve);
        FreqPolys fg = frequency_polynomials_nu(qp, n1, n2);
        double omega = 0.0;
        if (!recover_omega(fg, omega)) {
            ++out.rejected_omega;
            return;
        }
        double resid = std::abs(evaluate(qp, Complex(0.0, omega), n1 / omega, n2 / omega));
        if (resid >= kVertexResidual * term_scale(qp, Complex(0.0, omega))) {
            ++out.rejected_residual;
            return;
        }
        out.points.push_back({n1, n2, omega});
    };
    for (int k = 0; k < res; ++k) {
        double a = F[static_cast<size_t>(k)], b = F[static_cast<size_t>(k) + 1];
        if (a == 0.0) {
            try_accept(k * delta);
            continue;
        }
        if ((a > 0.0) == (b > 0.0) || b == 0.0) continue;
        double lo = k * delta, hi = (k + 1) * delta;
        double flo = a;
        while (hi - lo > kNuBisectTol) {
            double mid = 0.5 * (lo + hi);
            auto [n1, n2] = assemble(mid);
            double fm = building_resultant(qp, n1, n2);
            if (fm == 0.0) { lo = hi = mid; break; }
            if ((fm > 0.0) == (flo > 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        try_accept(0.5 * (lo + hi));
    }
    return out;
}

/// Greedy slice-to-slice linking; one point extends at most one branch and
/// vice versa, jump threshold 3 grid steps.
class BranchStitcher {
public:
    BranchStitcher(double jump, bool transpose) : jump2_(jump * jump), transpose_(transpose) {}

    void add_slice(int slice_idx, const std::vector<SdsPoint>& pts) {
        struct Cand {
            double d2;
            size_t branch, point;
        };
        std::vector<Cand> cands;
        for (size_t b = 0; b < open_.size(); ++b) {
            if (open_[b].last_slice != slice_idx - 1) continue;
            const SdsPoint& tail = open_[b].points.back();
            for (size_t p = 0; p < pts.size(); ++p) {
                double d1 = tail.nu1 - pts[p].nu1, d2 = tail.nu2 - pts[p].nu2;
                double dd = d1 * d1 + d2 * d2;
                if (dd <= jump2_) cands.push_back({dd, b, p});
            }
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.d2 < b.d2; });
        std::vector<char> branch_used(open_.size(), 0), point_used(pts.size(), 0);
        for (const auto& c : cands) {
            if (branch_used[c.branch] || point_used[c.point]) continue;
            branch_used[c.branch] = 1;
            point_used[c.point] = 1;
            open_[c.branch].points.push_back(pts[c.point]);
            open_[c.branch].last_slice = slice_idx;
        }
        for (size_t p = 0; p < pts.size(); ++p)
            if (!point_used[p]) open_.push_back({{pts[p]}, slice_idx});
        // Retire branches that fell behind (no sign of them for a full slice).
        std::vector<Open> still;
        for (auto& b : open_) {
            if (b.last_slice >= slice_idx - 1)
                still.push_back(std::move(b));
            else
                closed_.push_back(std::move(b));
        }
        open_ = std::move(still);
    }

    std::vector<BuildingBranch> finish() {
        for (auto& b : open_) closed_.push_back(std::move(b));
        open_.clear();
        std::vector<BuildingBranch> out;
        out.reserve(closed_.size());
        for (auto& c : closed_) out.push_back({std::move(c.points), transpose_});
        return out;
    }

private:
    struct Open {
        std::vector<SdsPoint> points;
        int last_slice = -10;
    };
    double jump2_;
    bool transpose_;
    std::vector<Open> open_;
    std::vector<Open> closed_;
};

/// Cell hash over the building block for near-point queries.
class PointHash {
public:
    PointHash(double cell) : cell_(cell), n_(static_cast<int>(kTwoPi / cell) + 2) {
        grid_.resize(static_cast<size_t>(n_) * n_);
    }

    void insert(const SdsPoint& p) {
        grid_[key(p.nu1, p.nu2)].push_back(p);
    }

    bool any_within(double nu1, double nu2, double r) const {
        int ci = clampi(static_cast<int>(nu1 / cell_));
        int cj = clampi(static_cast<int>(nu2 / cell_));
        int reach = static_cast<int>(r / cell_) + 1;
        for (int i = std::max(0, ci - reach); i <= std::min(n_ - 1, ci + reach); ++i)
            for (int j = std::max(0, cj - reach); j <= std::min(n_ - 1, cj + reach); ++j)
                for (const auto& p : grid_[static_cast<size_t>(j) * n_ + i]) {
                    double d1 = p.nu1 - nu1, d2 = p.nu2 - nu2;
                    if (d1 * d1 + d2 * d2 <= r * r) return true;
                }
        return false;
    }

private:
    int clampi(int v) const { return std::clamp(v, 0, n_ - 1); }
    size_t key(double x, double y) const {
        return static_cast<size_t>(clampi(static_cast<int>(y / cell_))) * n_ +
               clampi(static_cast<int>(x / cell_));
    }
    double cell_;
    int n_;
    std::vector<std::vector<SdsPoint>> grid_;
};

} // namespace

BuildingCurves trace_building_curves(const QuasiPolynomial& qp, int resolution, Exec exec) {
    if (resolution < 360) throw InputError("trace_building_curves: resolution must be at least 360");
    const double delta = kTwoPi / resolution;
    const double jump = 3.0 * delta;
    BuildingCurves out;

    for (int pass = 0; pass < 2; ++pass) {
        const bool transpose = pass == 1;
        std::vector<SliceResult> slices(static_cast<size_t>(resolution));
        auto run = [&](int k) {
            slices[static_cast<size_t>(k)] = scan_slice(qp, k * delta, transpose, resolution);
        };
        if (exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
            for (int k = 1; k < resolution; ++k) run(k);
        } else {
            for (int k = 1; k < resolution; ++k) run(k);
        }
        BranchStitcher stitcher(jump, transpose);
        for (int k = 1; k < resolution; ++k) {
            auto& sl = slices[static_cast<size_t>(k)];
            out.diag.rejected_omega += sl.rejected_omega;
            out.diag.rejected_residual += sl.rejected_residual;
            stitcher.add_slice(k, sl.points);
        }
        auto branches = stitcher.finish();
        if (!transpose) {
            for (auto& b : branches) out.branches.push_back(std::move(b));
        } else {
            // Novelty filter: admit transpose-pass points only where the main
            // pass has no coverage, so the union covers each locus once.
            PointHash hash(delta);
            for (const auto& b : out.branches)
                for (const auto& p : b.points) hash.insert(p);
            for (auto& b : branches) {
                BuildingBranch cur;
                cur.from_transpose_pass = true;
                for (const auto& p : b.points) {
                    if (hash.any_within(p.nu1, p.nu2, jump)) {
                        if (cur.points.size() > 1) out.branches.push_back(std::move(cur));
                        cur = BuildingBranch{};
                        cur.from_transpose_pass = true;
                    } else {
                        cur.points.push_back(p);
                    }
                }
                if (cur.points.size() > 1) out.branches.push_back(std::move(cur));
            }
        }
    }
    return out;
}

int building_component_count(const BuildingCurves& curves, int resolution) {
    std::vector<SdsPoint> all;
    for (const auto& b : curves.branches)
        for (const auto& p : b.points) all.push_back(p);
    const size_t n = all.size();
    if (n == 0) return 0;
    const double r = 3.0 * kTwoPi / resolution;
    std::vector<size_t> parent(n);
    for (size_t i = 0; i < n; ++i) parent[i] = i;
    std::function<size_t(size_t)> find = [&](size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    // Bucket by cell to avoid the quadratic sweep.
    const double cell = r;
    auto key = [&](const SdsPoint& p) {
        return std::pair<int, int>(static_cast<int>(p.nu1 / cell), static_cast<int>(p.nu2 / cell));
    };
    std::vector<std::pair<std::pair<int, int>, size_t>> items;
    items.reserve(n);
    for (size_t i = 0; i < n; ++i) items.push_back({key(all[i]), i});
    std::sort(items.begin(), items.end());
    auto cell_range = [&](int cx, int cy) {
        auto lo = std::lower_bound(items.begin(), items.end(),
                                   std::make_pair(std::make_pair(cx, cy), size_t(0)));
        auto hi = std::upper_bound(items.begin(), items.end(),
                                   std::make_pair(std::make_pair(cx, cy), SIZE_MAX));
        return std::make_pair(lo, hi);
    };
    for (size_t i = 0; i < n; ++i) {
        auto [cx, cy] = key(all[i]);
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy) {
                auto [lo, hi] = cell_range(cx + dx, cy + dy);
                for (auto it = lo; it != hi; ++it) {
                    size_t j = it->second;
                    if (j <= i) continue;
                    double d1 = all[i].nu1 - all[j].nu1, d2 = all[i].nu2 - all[j].nu2;
                    if (d1 * d1 + d2 * d2 <= r * r) parent[find(i)] = find(j);
                }
            }
    }
    int comps = 0;
    for (size_t i = 0; i < n; ++i)
        if (find(i) == i) ++comps;
    return comps;
}

namespace {

struct Triple {
    double tau1, tau2, omega;
};

/// Liang-Barsky clip of segment A->B against [0, box]^2; returns parameter
/// range [t0, t1] of the inside part.
bool clip_segment(const Triple& a, const Triple& b, double box, double& t0, double& t1) {
    double p[4] = {-(b.tau1 - a.tau1), b.tau1 - a.tau1, -(b.tau2 - a.tau2), b.tau2 - a.tau2};
    double q[4] = {a.tau1, box - a.tau1, a.tau2, box - a.tau2};
    t0 = 0.0;
    t1 = 1.0;
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) return false;
        } else {
            double r = q[i] / p[i];
            if (p[i] < 0.0)
                t0 = std::max(t0, r);
            else
                t1 = std::min(t1, r);
        }
    }
    return t0 <= t1;
}

Triple lerp(const Triple& a, const Triple& b, double t) {
    return {a.tau1 + t * (b.tau1 - a.tau1), a.tau2 + t * (b.tau2 - a.tau2),
            a.omega + t * (b.omega - a.omega)};
}

void clip_polyline(const std::vector<Triple>& pts, double box,
                   std::vector<std::vector<Triple>>& out) {
    std::vector<Triple> cur;
    auto flush = [&] {
        if (!cur.empty()) out.push_back(std::move(cur));
        cur.clear();
    };
    if (pts.size() == 1) {
        const Triple& p = pts[0];
        if (p.tau1 >= 0 && p.tau1 <= box && p.tau2 >= 0 && p.tau2 <= box) out.push_back({p});
        return;
    }
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        double t0, t1;
        if (!clip_segment(pts[i], pts[i + 1], box, t0, t1)) {
            flush();
            continue;
        }
        Triple av = lerp(pts[i], pts[i + 1], t0);
        Triple bv = lerp(pts[i], pts[i + 1], t1);
        if (cur.empty()) {
            cur.push_back(av);
        } else if (t0 > 0.0) {
            flush();
            cur.push_back(av);
        }
        cur.push_back(bv);
        if (t1 < 1.0) flush();
    }
    flush();
}

} // namespace

DelaySpaceCurves kernel_and_offspring(const QuasiPolynomial& qp, const BuildingCurves& curves,
                                      double tau_max) {
    if (!(tau_max > 0.0)) throw InputError("kernel_and_offspring: tau_max must be positive");
    DelaySpaceCurves out;
    out.tau_max = tau_max;
    out.diag = curves.diag;

    auto attach_rt = [&](const std::vector<Triple>& piece, int j1, int j2, std::vector<DelayCurve>& dest) {
        DelayCurve dc;
        dc.j1 = j1;
        dc.j2 = j2;
        dc.points.reserve(piece.size());
        for (const auto& t : piece) {
            CrossingVertex v{t.tau1, t.tau2, t.omega, 0, 0};
            try {
                v.rt1 = root_tendency(qp, t.tau1, t.tau2, t.omega, 1);
                v.rt2 = root_tendency(qp, t.tau1, t.tau2, t.omega, 2);
            } catch (const NumericalError&) {
                ++out.diag.degenerate_rt;
            }
            dc.points.push_back(v);
        }
        dest.push_back(std::move(dc));
    };

    for (const auto& branch : curves.branches) {
        double omega_peak = 0.0;
        for (const auto& p : branch.points) omega_peak = std::max(omega_peak, p.omega);
        if (omega_peak < kOmegaMin) {
            out.diag.rejected_omega += static_cast<int>(branch.points.size());
            continue;
        }
        const int jmax = static_cast<int>(std::ceil(tau_max * omega_peak / kTwoPi));

        // Split the branch at low-frequency vertices once; every (j1, j2)
        // image shares the split structure.
        std::vector<std::vector<SdsPoint>> runs(1);
        for (const auto& p : branch.points) {
            if (p.omega < kOmegaMin) {
                ++out.diag.rejected_omega;
                if (!runs.back().empty()) runs.emplace_back();
            } else {
                runs.back().push_back(p);
            }
        }

        for (int j1 = 0; j1 <= jmax; ++j1) {
            for (int j2 = 0; j2 <= jmax; ++j2) {
                auto& dest = (j1 == 0 && j2 == 0) ? out.kernel : out.offspring;
                for (const auto& run : runs) {
                    if (run.empty()) continue;
                    std::vector<Triple> mapped;
                    mapped.reserve(run.size());
                    for (const auto& p : run)
                        mapped.push_back({(p.nu1 + kTwoPi * j1) / p.omega,
                                          (p.nu2 + kTwoPi * j2) / p.omega, p.omega});
                    std::vector<std::vector<Triple>> pieces;
                    clip_polyline(mapped, tau_max, pieces);
                    for (const auto& piece : pieces) attach_rt(piece, j1, j2, dest);
                }
            }
        }
    }
    return out;
}

} // namespace ctcr
