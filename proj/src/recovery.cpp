#include "rodvoids/recovery.hpp"

#include <algorithm>
#include <cmath>

#include "rodvoids/errors.hpp"
#include "rodvoids/so3.hpp"

namespace rodvoids {

namespace {

struct FrameSample {
    Eigen::Vector3d y;
    Eigen::Matrix3d R;
    Eigen::Vector3d A; // curvature-torsion coefficients, zero on extensions
};

// Evaluate the limit configuration at axial position x1, extending linearly
// along the tangent beyond the segment ends.
FrameSample eval_segment(const Segment& seg, double x1) {
    FrameSample out;
    const double ds = seg.ds();
    const int ns = seg.sample_count() - 1;
    if (x1 <= seg.s0) {
        out.R = seg.rotations.front();
        out.y = seg.positions.front() + (x1 - seg.s0) * (out.R * Eigen::Vector3d::UnitX());
        out.A = Eigen::Vector3d::Zero();
        return out;
    }
    if (x1 >= seg.s1) {
        out.R = seg.rotations.back();
        out.y = seg.positions.back() + (x1 - seg.s1) * (out.R * Eigen::Vector3d::UnitX());
        out.A = Eigen::Vector3d::Zero();
        return out;
    }
    const double u = (x1 - seg.s0) / ds;
    const int k = std::min(static_cast<int>(u), ns - 1);
    const double frac = u - k;
    const Eigen::Vector3d v = log_so3(seg.rotations[k].transpose() * seg.rotations[k + 1]);
    out.R = seg.rotations[k] * exp_so3(frac * v);
    out.y = (1.0 - frac) * seg.positions[k] + frac * seg.positions[k + 1];
    out.A = v / ds;
    return out;
}

const Segment& nearest_segment(const LimitConfig& cfg, double x1) {
    const Segment* best = &cfg.segments.front();
    double best_dist = std::numeric_limits<double>::infinity();
    for (const Segment& seg : cfg.segments) {
        double d = 0.0;
        if (x1 < seg.s0)
            d = seg.s0 - x1;
        else if (x1 > seg.s1)
            d = x1 - seg.s1;
        if (d < best_dist) {
            best_dist = d;
            best = &seg;
        }
    }
    return *best;
}

} // namespace

VoidSet build_recovery_void(const LimitConfig& cfg, double h, const RodDomain& dom) {
    cfg.validate();
    VoidSet voids;
    for (const auto& iv : cfg.voids.intervals) voids.slabs.push_back({iv.a, iv.b});
    for (double t : cfg.breakpoints) {
        if (!(t - h > 0.0 && t + h < cfg.L))
            throw InvalidInputError("E_H_TOO_LARGE",
                                    "widened breakpoint slab leaves the rod");
        voids.slabs.push_back({t - h, t + h});
    }
    std::sort(voids.slabs.begin(), voids.slabs.end(),
              [](const Slab& a, const Slab& b) { return a.lo < b.lo; });
    for (size_t i = 0; i + 1 < voids.slabs.size(); ++i)
        if (voids.slabs[i].hi >= voids.slabs[i + 1].lo)
            throw InvalidInputError("E_H_TOO_LARGE",
                                    "widened slabs overlap for this value of h");
    voids.validate(dom);
    return voids;
}

Deformation3 build_recovery_deformation(const LimitConfig& cfg, const CellBasis& cell,
                                        double h, const RodDomain& dom,
                                        bool include_corrector) {
    cfg.validate();
    if (cfg.segments.empty())
        throw InvalidInputError("E_EMPTY_CONFIG", "limit configuration has no segments");
    for (const Segment& seg : cfg.segments)
        if (seg.ds() > h * (1.0 + 1e-12))
            throw InvalidInputError("E_RESOLUTION",
                                    "segment sampling must satisfy ds <= h");
    if (include_corrector)
        for (const auto& a : cell.alpha)
            if (a.size() != 3 * cell.mesh.node_count())
                throw InvalidInputError("E_MISSING_DEPENDENCY",
                                        "cell basis minimizers are missing");
    const double margin = cfg.sup_bound;
    bool sup_ok = true;
    for (const Segment& seg : cfg.segments)
        for (const auto& y : seg.positions) sup_ok = sup_ok && (y.norm() < margin);
    if (!sup_ok)
        throw PreconditionNotMet("E_SUP_BOUND",
                                 "recovery requires ||y||_inf strictly below M");

    const VoidSet voids = build_recovery_void(cfg, h, dom);
    const VoxelMask mask = make_voxel_mask(voids, dom);

    auto node_in_discrete_void = [&](int i, int j, int k) {
        // interior to the voxelized void: every incident element is void
        for (int a = std::max(0, i - 1); a <= std::min(dom.n1 - 1, i); ++a)
            for (int b = std::max(0, j - 1); b <= std::min(dom.n2 - 1, j); ++b)
                for (int c = std::max(0, k - 1); c <= std::min(dom.n3 - 1, k); ++c)
                    if (!mask.at(a, b, c)) return false;
        return true;
    };

    Deformation3 def;
    def.dom = dom;
    def.y.resize(dom.node_count());
    for (int i = 0; i <= dom.n1; ++i) {
        const double x1 = i * dom.dx1();
        const Segment& seg = nearest_segment(cfg, x1);
        const FrameSample fs = eval_segment(seg, x1);
        const Eigen::Vector3d d2 = fs.R.col(1), d3 = fs.R.col(2);
        for (int j = 0; j <= dom.n2; ++j)
            for (int k = 0; k <= dom.n3; ++k) {
                const Eigen::Vector3d xn = dom.node(i, j, k);
                if (node_in_discrete_void(i, j, k)) {
                    def.at(i, j, k) = dom.to_physical(xn);
                    continue;
                }
                Eigen::Vector3d yh = fs.y + h * xn.y() * d2 + h * xn.z() * d3;
                if (include_corrector)
                    yh += h * h * cell.corrector(fs.A, xn.y(), xn.z());
                def.at(i, j, k) = yh;
            }
    }
    return def;
}

RecoveryPair build_recovery_pair(const LimitConfig& cfg, const CellBasis& cell, double h,
                                 const RodDomain& dom, bool include_corrector) {
    RecoveryPair pair;
    pair.h = h;
    pair.dom = dom;
    pair.voids = build_recovery_void(cfg, h, dom);
    pair.def = build_recovery_deformation(cfg, cell, h, dom, include_corrector);
    return pair;
}

ConvergenceStudy convergence_study(const LimitConfig& cfg, const ElasticDensity& density,
                                   const CellBasis& cell, int n_cross,
                                   const std::vector<double>& h_list,
                                   double kappa_exponent, bool include_corrector) {
    for (size_t i = 0; i + 1 < h_list.size(); ++i)
        if (!(h_list[i] > h_list[i + 1]))
            throw InvalidInputError("E_BAD_SWEEP", "h list must be strictly decreasing");
    for (double h : h_list)
        if (!(h > 0.0 && h < 1.0))
            throw InvalidInputError("E_BAD_SWEEP", "h values must lie in (0, 1)");

    ConvergenceStudy study;
    study.e0 = eval_E0(cfg, cell.q2).total();

    for (double h : h_list) {
        const RodDomain dom = RodDomain::with_policy(cfg.L, h, n_cross);
        const double kappa_h = std::pow(h, kappa_exponent);
        const RecoveryPair pair = build_recovery_pair(cfg, cell, h, dom, include_corrector);
        const EnergyReport3D report = eval_Eh(pair.def, pair.voids, density, dom, kappa_h);

        ConvergenceRow row;
        row.h = h;
        row.elastic = report.elastic;
        row.perimeter = report.perimeter;
        row.curvature = report.curvature;
        row.total = report.total();
        row.e0 = study.e0;
        if (std::abs(row.total - row.e0) <= 1e-13)
            row.rel_gap = 0.0;
        else
            row.rel_gap = std::abs(row.total - row.e0) / std::max(row.e0, 1e-300);

        // tau-convergence proxies against the limit profile
        const VoxelMask mask = make_voxel_mask(pair.voids, dom);
        auto touches_material = [&](int i, int j, int k) {
            for (int a = std::max(0, i - 1); a <= std::min(dom.n1 - 1, i); ++a)
                for (int b = std::max(0, j - 1); b <= std::min(dom.n2 - 1, j); ++b)
                    for (int c = std::max(0, k - 1); c <= std::min(dom.n3 - 1, k); ++c)
                        if (!mask.at(a, b, c)) return true;
            return false;
        };
        for (int i = 0; i <= dom.n1; ++i) {
            const double x1 = i * dom.dx1();
            const FrameSample fs = eval_segment(nearest_segment(cfg, x1), x1);
            for (int j = 0; j <= dom.n2; ++j)
                for (int k = 0; k <= dom.n3; ++k) {
                    if (!touches_material(i, j, k)) continue;
                    row.sup_deviation = std::max(
                        row.sup_deviation, (pair.def.at(i, j, k) - fs.y).norm());
                }
        }
        const double w_elem = dom.dx1() * dom.dx2() * dom.dx3();
        for (int i = 0; i < dom.n1; ++i) {
            const double xc = (i + 0.5) * dom.dx1();
            const FrameSample fs = eval_segment(nearest_segment(cfg, xc), xc);
            for (int j = 0; j < dom.n2; ++j)
                for (int k = 0; k < dom.n3; ++k) {
                    if (mask.at(i, j, k)) continue;
                    // centroid-sampled rescaled gradient vs the limit frame
                    Eigen::Vector3d corners[2][2][2];
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b)
                            for (int c = 0; c < 2; ++c)
                                corners[a][b][c] = pair.def.at(i + a, j + b, k + c);
                    Eigen::Matrix3d G;
                    G.col(0) = (corners[1][0][0] + corners[1][1][0] + corners[1][0][1] +
                                corners[1][1][1] - corners[0][0][0] - corners[0][1][0] -
                                corners[0][0][1] - corners[0][1][1]) /
                               (4.0 * dom.dx1());
                    G.col(1) = (corners[0][1][0] + corners[1][1][0] + corners[0][1][1] +
                                corners[1][1][1] - corners[0][0][0] - corners[1][0][0] -
                                corners[0][0][1] - corners[1][0][1]) /
                               (4.0 * dom.dx2() * dom.h);
                    G.col(2) = (corners[0][0][1] + corners[1][0][1] + corners[0][1][1] +
                                corners[1][1][1] - corners[0][0][0] - corners[1][0][0] -
                                corners[0][1][0] - corners[1][1][0]) /
                               (4.0 * dom.dx3() * dom.h);
                    row.grad_deviation_sq += (G - fs.R).squaredNorm() * w_elem;
                }
        }
        study.rows.push_back(row);
    }
    return study;
}

} // namespace rodvoids
