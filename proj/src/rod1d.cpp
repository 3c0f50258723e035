#include "rodvoids/rod1d.hpp"

#include <algorithm>
#include <cmath>

#include "rodvoids/errors.hpp"
#include "rodvoids/so3.hpp"

namespace rodvoids {

namespace {

constexpr double kFrameTol = 1e-10;
constexpr double kCoverTol = 1e-9;

bool is_rotation_sample(const Eigen::Matrix3d& R) {
    return (R.transpose() * R - Eigen::Matrix3d::Identity()).norm() <= kFrameTol &&
           R.determinant() > 0.0;
}

// Elastic intervals of (0,L): the complement of the voids, split at
// breakpoints. Points closer than kCoverTol are identified.
std::vector<std::pair<double, double>> elastic_intervals(
    double L, const std::vector<double>& breakpoints, const VoidIntervals& voids) {
    std::vector<double> cuts{0.0, L};
    for (double t : breakpoints) cuts.push_back(t);
    for (const auto& iv : voids.intervals) {
        cuts.push_back(iv.a);
        cuts.push_back(iv.b);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return std::abs(a - b) <= kCoverTol; }),
               cuts.end());

    std::vector<std::pair<double, double>> out;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        if (!voids.contains(mid)) out.emplace_back(cuts[i], cuts[i + 1]);
    }
    return out;
}

} // namespace

void VoidIntervals::validate(double L) const {
    double prev_end = -1.0;
    for (const auto& iv : intervals) {
        if (!(iv.a >= 0.0 && iv.a < iv.b && iv.b <= L))
            throw InvalidInputError("E_BAD_VOIDS",
                                    "void intervals must satisfy 0 <= a < b <= L");
        if (iv.a <= prev_end)
            throw InvalidInputError("E_BAD_VOIDS",
                                    "void intervals must be sorted and disjoint");
        prev_end = iv.b;
    }
}

bool VoidIntervals::contains(double x, double tol) const {
    for (const auto& iv : intervals)
        if (x > iv.a + tol && x < iv.b - tol) return true;
    return false;
}

double VoidIntervals::total_length() const {
    double s = 0.0;
    for (const auto& iv : intervals) s += iv.b - iv.a;
    return s;
}

void LimitConfig::validate() const {
    if (L <= 0.0) throw InvalidInputError("E_BAD_LENGTH", "rod length must be positive");
    voids.validate(L);
    for (size_t i = 0; i < breakpoints.size(); ++i) {
        const double t = breakpoints[i];
        if (!(t > 0.0 && t < L))
            throw InvalidInputError("E_BAD_BREAKPOINTS",
                                    "breakpoints must lie strictly inside (0, L)");
        if (i > 0 && t <= breakpoints[i - 1])
            throw InvalidInputError("E_BAD_BREAKPOINTS", "breakpoints must be increasing");
        if (voids.contains(t, kBreakVoidCoincidenceTol))
            throw InvalidInputError("E_BAD_BREAKPOINTS",
                                    "breakpoint inside the interior of a void interval");
    }

    const auto intervals = elastic_intervals(L, breakpoints, voids);
    if (intervals.size() != segments.size())
        throw InvalidInputError("E_BAD_SEGMENTS",
                                "segments must cover (0,L) minus voids, split at breakpoints");
    for (size_t i = 0; i < segments.size(); ++i) {
        const Segment& seg = segments[i];
        if (std::abs(seg.s0 - intervals[i].first) > kCoverTol ||
            std::abs(seg.s1 - intervals[i].second) > kCoverTol)
            throw InvalidInputError("E_BAD_SEGMENTS", "segment endpoints do not match cover");
        if (seg.sample_count() < 2 || seg.positions.size() != seg.rotations.size())
            throw InvalidInputError("E_BAD_SEGMENTS", "segment needs matched R/y samples");
        for (const auto& R : seg.rotations)
            if (!is_rotation_sample(R))
                throw InvalidInputError("E_BAD_FRAME",
                                        "sampled frame violates the SO(3) tolerance");
        for (const auto& y : seg.positions)
            if (y.norm() > sup_bound)
                throw InvalidInputError("E_SUP_BOUND", "deformation exceeds the bound M");
    }
}

LimitConfig LimitConfig::straight(double L, double M) {
    return from_frame_field(
        L, [](double) { return Eigen::Matrix3d::Identity(); }, Eigen::Vector3d::Zero(),
        L / 512.0, M);
}

LimitConfig LimitConfig::from_frame_field(
    double L, const std::function<Eigen::Matrix3d(double)>& frame_field,
    const Eigen::Vector3d& y0, double ds, double M, const std::vector<double>& breakpoints,
    const VoidIntervals& voids) {
    LimitConfig cfg;
    cfg.L = L;
    cfg.sup_bound = M;
    cfg.breakpoints = breakpoints;
    cfg.voids = voids;

    const auto intervals = elastic_intervals(L, breakpoints, voids);
    Eigen::Vector3d prev_end = y0;
    bool prev_is_segment = false;
    double prev_s1 = 0.0;
    for (const auto& [s0, s1] : intervals) {
        Segment seg;
        seg.s0 = s0;
        seg.s1 = s1;
        const int ns = std::max(1, static_cast<int>(std::ceil((s1 - s0) / ds)));
        const double step = (s1 - s0) / ns;
        seg.rotations.reserve(ns + 1);
        // segment-end samples take one-sided limits: cut points carry the
        // jump, so nudge the evaluation inward
        const double nudge = 1e-7 * step;
        for (int k = 0; k <= ns; ++k) {
            double s = s0 + k * step;
            if (k == 0) s += nudge;
            if (k == ns) s -= nudge;
            seg.rotations.push_back(frame_field(s));
        }

        Eigen::Vector3d anchor;
        if (s0 <= kCoverTol) {
            anchor = y0;
        } else if (prev_is_segment && std::abs(s0 - prev_s1) <= kCoverTol) {
            anchor = prev_end; // continuity across a breakpoint
        } else {
            anchor = s0 * Eigen::Vector3d::UnitX(); // continuity with the identity void
        }
        seg.positions.resize(ns + 1);
        seg.positions[0] = anchor;
        for (int k = 0; k < ns; ++k) {
            const Eigen::Vector3d v = log_so3(seg.rotations[k].transpose() * seg.rotations[k + 1]);
            const Eigen::Matrix3d mid = seg.rotations[k] * exp_so3(0.5 * v);
            seg.positions[k + 1] = seg.positions[k] + step * (mid * Eigen::Vector3d::UnitX());
        }
        prev_end = seg.positions.back();
        prev_is_segment = true;
        prev_s1 = s1;
        cfg.segments.push_back(std::move(seg));
    }
    cfg.validate();
    return cfg;
}

std::vector<Eigen::Vector3d> segment_curvature(const Segment& seg) {
    std::vector<Eigen::Vector3d> out;
    const double ds = seg.ds();
    out.reserve(seg.sample_count() - 1);
    for (int k = 0; k + 1 < seg.sample_count(); ++k)
        out.push_back(log_so3(seg.rotations[k].transpose() * seg.rotations[k + 1]) / ds);
    return out;
}

EnergyBreakdown1D eval_E0(const LimitConfig& cfg, const Q2Matrix& B) {
    cfg.validate();
    EnergyBreakdown1D out;

    for (const Segment& seg : cfg.segments) {
        const double ds = seg.ds();
        for (const Eigen::Vector3d& a : segment_curvature(seg))
            out.elastic += 0.5 * a.dot(B.B * a) * ds;
    }

    int endpoints = 0;
    for (const auto& iv : cfg.voids.intervals) {
        if (iv.a > 0.0) ++endpoints;
        if (iv.b < cfg.L) ++endpoints;
    }
    out.void_endpoints = endpoints;

    int collapsed = 0;
    for (double t : cfg.breakpoints) {
        bool coincides = false;
        for (const auto& iv : cfg.voids.intervals)
            if (std::abs(t - iv.a) <= kBreakVoidCoincidenceTol ||
                std::abs(t - iv.b) <= kBreakVoidCoincidenceTol)
                coincides = true;
        if (!coincides) ++collapsed;
    }
    out.collapsed = 2.0 * collapsed;
    return out;
}

double chain_energy(const std::vector<Eigen::Matrix3d>& rotations, double ds,
                    const Q2Matrix& B) {
    double e = 0.0;
    for (size_t k = 0; k + 1 < rotations.size(); ++k) {
        const Eigen::Vector3d a = log_so3(rotations[k].transpose() * rotations[k + 1]) / ds;
        e += 0.5 * a.dot(B.B * a) * ds;
    }
    return e;
}

std::vector<Eigen::Vector3d> chain_energy_gradient(
    const std::vector<Eigen::Matrix3d>& R, double ds, const Q2Matrix& B,
    bool left_fixed, bool right_fixed) {
    const size_t n = R.size();
    std::vector<Eigen::Vector3d> grad(n, Eigen::Vector3d::Zero());
    std::vector<Eigen::Vector3d> v(n - 1);
    for (size_t k = 0; k + 1 < n; ++k) v[k] = log_so3(R[k].transpose() * R[k + 1]);

    for (size_t j = 0; j < n; ++j) {
        if ((j == 0 && left_fixed) || (j == n - 1 && right_fixed)) continue;
        Eigen::Vector3d g = Eigen::Vector3d::Zero();
        if (j > 0)
            g += right_jacobian_inv_so3(v[j - 1]).transpose() * (B.B * v[j - 1]);
        if (j + 1 < n)
            g -= left_jacobian_inv_so3(v[j]).transpose() * (B.B * v[j]);
        grad[j] = g / ds;
    }
    return grad;
}

SegmentMinimizeResult minimize_segment(const std::optional<Eigen::Matrix3d>& left_frame,
                                       const std::optional<Eigen::Matrix3d>& right_frame,
                                       double length, const Q2Matrix& B, double ds,
                                       double grad_tol, int max_iters) {
    if (length <= 0.0)
        throw InvalidInputError("E_BAD_LENGTH", "segment length must be positive");
    if (!left_frame && !right_frame)
        throw InvalidInputError("E_NO_BOUNDARY",
                                "segment minimization needs at least one boundary frame");

    const int ns = std::max(1, static_cast<int>(std::lround(length / ds)));
    SegmentMinimizeResult res;
    res.rotations.resize(ns + 1);

    if (left_frame && right_frame) {
        const Eigen::Vector3d w = log_so3(left_frame->transpose() * (*right_frame));
        for (int k = 0; k <= ns; ++k)
            res.rotations[k] = (*left_frame) * exp_so3((static_cast<double>(k) / ns) * w);
    } else {
        const Eigen::Matrix3d anchor = left_frame ? *left_frame : *right_frame;
        for (int k = 0; k <= ns; ++k) res.rotations[k] = anchor;
    }

    const double step_ds = length / ns;
    double energy = chain_energy(res.rotations, step_ds, B);
    std::vector<Eigen::Matrix3d> trial(ns + 1);
    double step = 1.0;

    int it = 0;
    for (; it < max_iters; ++it) {
        const std::vector<Eigen::Vector3d> grad = chain_energy_gradient(
            res.rotations, step_ds, B, left_frame.has_value(), right_frame.has_value());
        double gnorm2 = 0.0;
        for (const auto& g : grad) gnorm2 += g.squaredNorm();
        if (std::sqrt(gnorm2) < grad_tol) {
            res.converged = true;
            break;
        }

        bool accepted = false;
        step = std::min(step * 2.0, 1e6);
        for (int ls = 0; ls < 60; ++ls) {
            for (int k = 0; k <= ns; ++k)
                trial[k] = grad[k].isZero() ? res.rotations[k]
                                            : res.rotations[k] * exp_so3(-step * grad[k]);
            const double trial_energy = chain_energy(trial, step_ds, B);
            if (trial_energy <= energy - 1e-4 * step * gnorm2) {
                res.rotations.swap(trial);
                energy = trial_energy;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break; // line search stalled at rounding level
    }
    res.energy = energy;
    res.iterations = it;
    return res;
}

namespace {

struct Candidate {
    std::vector<double> breaks;
    std::vector<VoidIntervals::Interval> voids;
};

// Enumerate assignments of k chosen cut points into single breaks and
// adjacent void pairs.
void enumerate_assignments(const std::vector<double>& cuts, size_t pos, Candidate& cur,
                           std::vector<Candidate>& out) {
    if (pos == cuts.size()) {
        out.push_back(cur);
        return;
    }
    cur.breaks.push_back(cuts[pos]);
    enumerate_assignments(cuts, pos + 1, cur, out);
    cur.breaks.pop_back();
    if (pos + 1 < cuts.size()) {
        cur.voids.push_back({cuts[pos], cuts[pos + 1]});
        enumerate_assignments(cuts, pos + 2, cur, out);
        cur.voids.pop_back();
    }
}

} // namespace

MinimizeE0Result minimize_E0(const ClampedBoundary& bc, double L, const Q2Matrix& B,
                             const std::vector<double>& candidate_break_grid,
                             int max_discontinuities, double ds) {
    if (max_discontinuities < 0 || max_discontinuities > 6)
        throw InvalidInputError("E_BAD_BUDGET",
                                "max_discontinuities must lie in [0, 6]");
    std::vector<double> grid = candidate_break_grid;
    std::sort(grid.begin(), grid.end());
    for (double t : grid)
        if (!(t > 0.0 && t < L))
            throw InvalidInputError("E_BAD_GRID",
                                    "candidate positions must lie strictly inside (0, L)");

    struct Plan {
        Candidate cand;
        double energy = 0.0;
        std::vector<Eigen::Matrix3d> base_chain; // only for the cut-free plan
    };
    std::optional<Plan> best;
    int explored = 0;

    auto consider = [&](Plan plan) {
        if (!best || plan.energy < best->energy) best = std::move(plan);
    };

    // Cut-free candidate: both clamps act on one segment; feasible only if
    // the integrated endpoint matches the clamp.
    {
        SegmentMinimizeResult seg = minimize_segment(bc.frame0, bc.frameL, L, B, ds);
        Eigen::Vector3d y = bc.y0;
        const double step = L / (seg.rotations.size() - 1);
        for (size_t k = 0; k + 1 < seg.rotations.size(); ++k) {
            const Eigen::Vector3d v = log_so3(seg.rotations[k].transpose() * seg.rotations[k + 1]);
            y += step * (seg.rotations[k] * exp_so3(0.5 * v) * Eigen::Vector3d::UnitX());
        }
        ++explored;
        if ((y - bc.yL).norm() <= bc.position_tol) {
            Plan plan;
            plan.energy = seg.energy;
            plan.base_chain = std::move(seg.rotations);
            consider(std::move(plan));
        }
    }

    // Candidates with cuts: every elastic piece has at most one clamped end,
    // so a constant frame attains zero elastic energy and the positions are
    // absorbed by the paid-for jumps. Cost: 2 per break, 1 per interior void
    // endpoint.
    const int n = static_cast<int>(grid.size());
    std::vector<int> idx;
    std::function<void(int, int)> choose = [&](int start, int remaining) {
        if (!idx.empty()) {
            std::vector<double> cuts;
            cuts.reserve(idx.size());
            for (int i : idx) cuts.push_back(grid[i]);
            Candidate cur;
            std::vector<Candidate> assignments;
            enumerate_assignments(cuts, 0, cur, assignments);
            for (auto& cand : assignments) {
                ++explored;
                Plan plan;
                plan.cand = cand;
                plan.energy = 2.0 * cand.breaks.size() + 2.0 * cand.voids.size();
                consider(std::move(plan));
            }
        }
        if (remaining == 0) return;
        for (int i = start; i < n; ++i) {
            idx.push_back(i);
            choose(i + 1, remaining - 1);
            idx.pop_back();
        }
    };
    choose(0, max_discontinuities);

    if (!best)
        throw PreconditionNotMet("E_INFEASIBLE",
                                 "no candidate satisfies the clamped boundary data");

    // Materialize the winning configuration.
    MinimizeE0Result out;
    out.candidates_explored = explored;
    LimitConfig& cfg = out.config;
    cfg.L = L;
    cfg.sup_bound = std::max(10.0, 2.0 * (bc.y0.norm() + bc.yL.norm() + L));
    cfg.breakpoints = best->cand.breaks;
    std::sort(cfg.breakpoints.begin(), cfg.breakpoints.end());
    cfg.voids.intervals = best->cand.voids;
    std::sort(cfg.voids.intervals.begin(), cfg.voids.intervals.end(),
              [](const auto& u, const auto& v) { return u.a < v.a; });

    const auto intervals = elastic_intervals(L, cfg.breakpoints, cfg.voids);
    Eigen::Vector3d prev_end = bc.y0;
    for (size_t i = 0; i < intervals.size(); ++i) {
        const auto [s0, s1] = intervals[i];
        Segment seg;
        seg.s0 = s0;
        seg.s1 = s1;
        if (best->base_chain.size() > 0) {
            seg.rotations = best->base_chain;
        } else {
            const bool at_left = s0 <= kCoverTol;
            const bool at_right = std::abs(s1 - L) <= kCoverTol;
            const Eigen::Matrix3d frame =
                at_left ? bc.frame0 : (at_right ? bc.frameL : Eigen::Matrix3d::Identity());
            const int ns = std::max(1, static_cast<int>(std::lround((s1 - s0) / ds)));
            seg.rotations.assign(ns + 1, frame);
        }
        const int ns = seg.sample_count() - 1;
        const double step = (s1 - s0) / ns;
        // anchor: clamp at the ends, identity next to voids, continuity else
        Eigen::Vector3d anchor;
        if (s0 <= kCoverTol)
            anchor = bc.y0;
        else if (std::abs(s1 - L) <= kCoverTol) {
            Eigen::Vector3d span = Eigen::Vector3d::Zero();
            for (int k = 0; k < ns; ++k) {
                const Eigen::Vector3d v =
                    log_so3(seg.rotations[k].transpose() * seg.rotations[k + 1]);
                span += step * (seg.rotations[k] * exp_so3(0.5 * v) * Eigen::Vector3d::UnitX());
            }
            anchor = bc.yL - span;
        } else {
            bool after_void = false;
            for (const auto& iv : cfg.voids.intervals)
                if (std::abs(iv.b - s0) <= kCoverTol) after_void = true;
            anchor = after_void ? Eigen::Vector3d(s0, 0.0, 0.0) : prev_end;
        }
        seg.positions.resize(ns + 1);
        seg.positions[0] = anchor;
        for (int k = 0; k < ns; ++k) {
            const Eigen::Vector3d v = log_so3(seg.rotations[k].transpose() * seg.rotations[k + 1]);
            seg.positions[k + 1] =
                seg.positions[k] +
                step * (seg.rotations[k] * exp_so3(0.5 * v) * Eigen::Vector3d::UnitX());
        }
        prev_end = seg.positions.back();
        cfg.segments.push_back(std::move(seg));
    }
    cfg.validate();
    out.energy = eval_E0(cfg, B);
    return out;
}

} // namespace rodvoids

// ---------------------------------------------------------------------------
// Named fixtures

#include "rodvoids/fixtures.hpp"

namespace rodvoids {

LimitConfig make_fixture(const std::string& name, double L, double ds, double M) {
    const auto identity = [](double) { return Eigen::Matrix3d::Identity(); };
    if (name == "straight")
        return LimitConfig::from_frame_field(L, identity, Eigen::Vector3d::Zero(), ds, M);
    if (name == "straight-with-void") {
        VoidIntervals voids;
        voids.intervals.push_back({0.35 * L, 0.6 * L});
        return LimitConfig::from_frame_field(L, identity, Eigen::Vector3d::Zero(), ds, M,
                                             {}, voids);
    }
    if (name == "boundary-void") {
        VoidIntervals voids;
        voids.intervals.push_back({0.0, 7.0 * L / 12.0});
        return LimitConfig::from_frame_field(L, identity, Eigen::Vector3d::Zero(), ds, M,
                                             {}, voids);
    }
    if (name == "kink") {
        const double t = 7.0 * L / 12.0;
        const Eigen::Matrix3d bent = exp_so3(Eigen::Vector3d(0.0, 0.0, 0.8));
        return LimitConfig::from_frame_field(
            L, [&](double s) { return s < t ? Eigen::Matrix3d::Identity() : bent; },
            Eigen::Vector3d::Zero(), ds, M, {t});
    }
    if (name == "arc") {
        const double curvature = 0.9 / L;
        return LimitConfig::from_frame_field(
            L,
            [&](double s) { return exp_so3(Eigen::Vector3d(0.0, 0.0, curvature * s)); },
            Eigen::Vector3d::Zero(), ds, M);
    }
    if (name == "helix") {
        const Eigen::Vector3d rates(0.6 / L, 0.0, 0.8 / L);
        return LimitConfig::from_frame_field(
            L, [&](double s) { return exp_so3(s * rates); }, Eigen::Vector3d::Zero(), ds,
            M);
    }
    throw InvalidInputError("E_UNKNOWN_FIXTURE", "unknown fixture name: " + name);
}

} // namespace rodvoids
