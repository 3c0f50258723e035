#ifndef RODVOIDS_VOIDSET_HPP
#define RODVOIDS_VOIDSET_HPP

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace rodvoids {

// Hexahedral grid over the rescaled domain Omega = (0,L) x (-1/2,1/2)^2;
// the physical domain Omega_h is its image under T_h = diag(1, h, h).
struct RodDomain {
    double L = 1.0;
    double h = 0.1;
    int n1 = 80, n2 = 8, n3 = 8; // n2 == n3

    static RodDomain make(double L, double h, int n1, int n2, int n3);
    // Axial resolution chosen so elements are cubes in physical coordinates:
    // n1 = round(n_cross * L / h).
    static RodDomain with_policy(double L, double h, int n_cross);

    double dx1() const { return L / n1; }
    double dx2() const { return 1.0 / n2; }
    double dx3() const { return 1.0 / n3; }
    int element_count() const { return n1 * n2 * n3; }
    int node_count() const { return (n1 + 1) * (n2 + 1) * (n3 + 1); }
    int node_index(int i, int j, int k) const {
        return (i * (n2 + 1) + j) * (n3 + 1) + k;
    }
    int element_index(int i, int j, int k) const { return (i * n2 + j) * n3 + k; }
    // Rescaled coordinates of grid entities.
    Eigen::Vector3d node(int i, int j, int k) const {
        return {i * dx1(), -0.5 + j * dx2(), -0.5 + k * dx3()};
    }
    Eigen::Vector3d element_center(int i, int j, int k) const {
        return {(i + 0.5) * dx1(), -0.5 + (j + 0.5) * dx2(), -0.5 + (k + 0.5) * dx3()};
    }
    // Physical image of a rescaled point.
    Eigen::Vector3d to_physical(const Eigen::Vector3d& x) const {
        return {x.x(), h * x.y(), h * x.z()};
    }
};

// Void primitives live in physical Omega_h coordinates.
struct Ball {
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    double r = 0.0;
};

// Full-cross-section slab x1 in (lo, hi).
struct Slab {
    double lo = 0.0, hi = 0.0;
};

// Axis-aligned box; restricted to slab-like pieces spanning the whole cross
// section so that the boundary stays C^2 inside Omega_h (no interior edges).
struct BoxPrimitive {
    Eigen::Vector3d lo = Eigen::Vector3d::Zero();
    Eigen::Vector3d hi = Eigen::Vector3d::Zero();
};

// Per-element indicator derived from primitives by center sampling, or
// supplied directly.
struct VoxelMask {
    int n1 = 0, n2 = 0, n3 = 0;
    std::vector<std::uint8_t> inside; // element-ordered, (i*n2+j)*n3+k

    bool at(int i, int j, int k) const { return inside[(i * n2 + j) * n3 + k] != 0; }
};

// Axis-aligned query region in physical coordinates: x1 in (x_lo, x_hi),
// cross section (-cross_half, cross_half)^2.
struct AxisRegion {
    double x_lo = 0.0, x_hi = 0.0;
    double cross_half = 0.0;
};

struct VoidSet {
    std::vector<Ball> balls;
    std::vector<Slab> slabs;
    std::vector<BoxPrimitive> boxes;
    std::optional<VoxelMask> voxel_mask;

    bool has_primitives() const {
        return !balls.empty() || !slabs.empty() || !boxes.empty();
    }
    bool empty() const { return !has_primitives() && !voxel_mask.has_value(); }

    // Containment, ball disjointness/compact containment, box spanning, and
    // voxel/primitive consistency under the center-sampling rule.
    void validate(const RodDomain& dom) const;

    // Point membership in physical coordinates (primitives if present, else
    // the voxel mask via the owning element).
    bool contains_physical(const Eigen::Vector3d& p, const RodDomain& dom) const;

    // Analytic boundary measures of the primitive boundary inside a region
    // (used by the cuboid classification). Balls must fit laterally inside
    // the region; slab-like primitives are exact.
    double boundary_area_in(const AxisRegion& region) const;
    double volume_in(const AxisRegion& region) const;
};

VoxelMask make_voxel_mask(const VoidSet& voids, const RodDomain& dom);

} // namespace rodvoids

#endif
