#ifndef RODVOIDS_ROD1D_HPP
#define RODVOIDS_ROD1D_HPP

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rodvoids/cell_problem.hpp"
#include "rodvoids/material.hpp"

namespace rodvoids {

// Disjoint open intervals (a_j, b_j) inside (0, L): the void part of the
// limit configuration.
struct VoidIntervals {
    struct Interval {
        double a = 0.0, b = 0.0;
    };
    std::vector<Interval> intervals; // sorted, pairwise disjoint

    void validate(double L) const;
    bool contains(double x, double tol = 0.0) const;
    double total_length() const;
};

// One elastic piece of the rod: rotations sampled uniformly on [s0, s1]
// together with the deformed positions (y integrated from y' = R e1 at
// construction time and stored per sample).
struct Segment {
    double s0 = 0.0, s1 = 0.0;
    std::vector<Eigen::Matrix3d> rotations; // ns + 1 samples
    std::vector<Eigen::Vector3d> positions; // ns + 1 samples

    int sample_count() const { return static_cast<int>(rotations.size()); }
    double ds() const { return (s1 - s0) / (sample_count() - 1); }
};

// A framed curve (y | d2 | d3) with structural breakpoints and void
// intervals; the state space of the one-dimensional limit energy. On void
// intervals the configuration is implicitly the identity: R = Id and
// y(x1) = x1 e1.
struct LimitConfig {
    double L = 1.0;
    double sup_bound = 10.0;             // M
    std::vector<double> breakpoints;     // sorted, strictly inside (0, L)
    VoidIntervals voids;
    std::vector<Segment> segments;       // cover (0,L) minus voids, split at breakpoints

    void validate() const;

    // Builders. `frame_field` gives R(s); y is integrated with the midpoint
    // rotation per step, `y0` anchors the left end of each segment unless a
    // void or domain boundary pins it.
    static LimitConfig straight(double L, double M = 10.0);
    static LimitConfig from_frame_field(
        double L, const std::function<Eigen::Matrix3d(double)>& frame_field,
        const Eigen::Vector3d& y0, double ds, double M = 10.0,
        const std::vector<double>& breakpoints = {}, const VoidIntervals& voids = {});
};

// The three parts of the limit energy: the quadratic bending-torsion term,
// the count of void endpoints inside (0, L), and twice the count of
// breakpoints away from void endpoints.
struct EnergyBreakdown1D {
    double elastic = 0.0;
    double void_endpoints = 0.0;
    double collapsed = 0.0;
    double total() const { return elastic + void_endpoints + collapsed; }
};

// Tolerance for identifying a breakpoint with a void endpoint.
inline constexpr double kBreakVoidCoincidenceTol = 1e-9;

EnergyBreakdown1D eval_E0(const LimitConfig& cfg, const Q2Matrix& B);

// Discrete curvature-torsion samples A_i = unhat(log(R_i^T R_{i+1})) / ds,
// one per sample interval of the segment.
std::vector<Eigen::Vector3d> segment_curvature(const Segment& seg);

// Local minimization of (1/2) int Q2(R^T R') over one segment by Riemannian
// gradient descent with right-multiplicative updates. Free boundaries are
// expressed by nullopt. Returns the rotation samples; `converged` reports
// whether the gradient tolerance was reached within the iteration budget.
struct SegmentMinimizeResult {
    std::vector<Eigen::Matrix3d> rotations;
    double energy = 0.0;
    bool converged = false;
    int iterations = 0;
};

SegmentMinimizeResult minimize_segment(const std::optional<Eigen::Matrix3d>& left_frame,
                                       const std::optional<Eigen::Matrix3d>& right_frame,
                                       double length, const Q2Matrix& B, double ds,
                                       double grad_tol = 1e-8, int max_iters = 100000);

// Energy of a rotation-sample chain (helper shared with tests).
double chain_energy(const std::vector<Eigen::Matrix3d>& rotations, double ds,
                    const Q2Matrix& B);

// Riemannian gradient of chain_energy with respect to right-multiplicative
// perturbations R_j <- R_j exp(hat(xi_j)); fixed ends get zero entries.
std::vector<Eigen::Vector3d> chain_energy_gradient(
    const std::vector<Eigen::Matrix3d>& rotations, double ds, const Q2Matrix& B,
    bool left_fixed, bool right_fixed);

// Clamped boundary data for the global search.
struct ClampedBoundary {
    Eigen::Matrix3d frame0 = Eigen::Matrix3d::Identity();
    Eigen::Matrix3d frameL = Eigen::Matrix3d::Identity();
    Eigen::Vector3d y0 = Eigen::Vector3d::Zero();
    Eigen::Vector3d yL = Eigen::Vector3d::Zero();
    double position_tol = 1e-6;
};

struct MinimizeE0Result {
    LimitConfig config;
    EnergyBreakdown1D energy;
    int candidates_explored = 0;
};

// Exhaustive search over placements of up to `max_discontinuities` breaks on
// the candidate grid, minimizing each elastic piece; returns the cheapest
// explored configuration (an upper bound for the minimum over the candidate
// set). Throws PreconditionNotMet when no candidate is feasible.
MinimizeE0Result minimize_E0(const ClampedBoundary& bc, double L, const Q2Matrix& B,
                             const std::vector<double>& candidate_break_grid,
                             int max_discontinuities, double ds);

} // namespace rodvoids

#endif
