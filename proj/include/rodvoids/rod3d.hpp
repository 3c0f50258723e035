#ifndef RODVOIDS_ROD3D_HPP
#define RODVOIDS_ROD3D_HPP

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rodvoids/material.hpp"
#include "rodvoids/voidset.hpp"

namespace rodvoids {

// Nodal deformation on the rescaled grid with trilinear interpolation. The
// rescaled gradient nabla_h y = (d1 y, h^-1 d2 y, h^-1 d3 y) is evaluated at
// the 2x2x2 Gauss points of each element.
struct Deformation3 {
    RodDomain dom;
    std::vector<Eigen::Vector3d> y; // node-ordered, dom.node_index

    static Deformation3 rest(const RodDomain& dom); // y = T_h(id)

    Eigen::Vector3d& at(int i, int j, int k) { return y[dom.node_index(i, j, k)]; }
    const Eigen::Vector3d& at(int i, int j, int k) const {
        return y[dom.node_index(i, j, k)];
    }
    double max_norm() const;
};

struct EnergyReport3D {
    double elastic = 0.0;
    double perimeter = 0.0;
    double curvature = 0.0;
    double total() const { return elastic + perimeter + curvature; }
};

// Elastic part h^-2 int_{Omega \ V} W(nabla_h y): elements count as elastic
// iff their center lies outside the void.
double eval_elastic(const Deformation3& def, const VoidSet& voids,
                    const ElasticDensity& density, const RodDomain& dom);

// Rescaled surface energy of the void boundary: (perimeter, curvature)
// parts, both analytic for primitives. For a ball of radius r the pair is
// (4 pi r^2 h^-2, 8 pi kappa_h h^-2); slab faces carry area h^2 each and no
// curvature. A voxel-only void supports the perimeter part (anisotropic
// face weights) but has no curvature: kappa_h > 0 then raises an error.
std::pair<double, double> eval_surface(const VoidSet& voids, const RodDomain& dom,
                                       double kappa_h);

EnergyReport3D eval_Eh(const Deformation3& def, const VoidSet& voids,
                       const ElasticDensity& density, const RodDomain& dom,
                       double kappa_h);

enum class CuboidLabel { Good, Bad, Ugly };

// Tiling of the physical rod by T-cuboids of axial extent T*h, with the
// 3T-cuboids and their shrunken versions used for classification.
struct CuboidPartition {
    double L = 0.0, h = 0.0;
    int T = 10;
    double rho = 0.0;
    int N = 0; // number of T-cuboids, floor(L/(T h)) + 1

    double x_lo(int i) const { return (i - 1) * T * h; }          // 1-based
    double x_hi(int i) const { return i * T * h; }
    double center(int i) const { return (i - 0.5) * T * h; }
    bool interior(int i) const { return i >= 2 && i <= N - 1; }
    // 3T-cuboid around index i (defined for interior i).
    double q3_lo(int i) const { return x_lo(i - 1); }
    double q3_hi(int i) const { return x_hi(i + 1); }
    // Shrunken 3T-cuboid, factor (1 - rho) about the center of Q(i).
    AxisRegion q3_shrunk(int i) const;
};

inline double rho0() { return 1.0 - std::cbrt(19.0 / 20.0); }

CuboidPartition partition_cuboids(const RodDomain& dom, int T, double rho);

struct CuboidStats {
    int index = 0;
    CuboidLabel label = CuboidLabel::Ugly;
    double area = 0.0;   // H^2(boundary of void inside the shrunken 3T-cuboid)
    double volume = 0.0; // void volume inside the shrunken 3T-cuboid
};

// Good if area <= alpha h^2; else bad if area < (1-rho)^2 h^2, or if
// area < 2 (1-rho)^2 h^2 with void volume <= 2 C_iso h^3; else ugly.
// Boundary indices are ugly.
std::vector<CuboidStats> classify_cuboids(const CuboidPartition& part,
                                          const VoidSet& voids, double alpha,
                                          double c_iso_estimate);

struct CuboidProbe {
    int index = 0;
    CuboidLabel label = CuboidLabel::Ugly;
    bool defined = false; // dominant component nonempty
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    double residual_sym = 0.0;  // int_dom |sym(R^T nabla v - Id)|^2
    double residual_full = 0.0; // int_dom |nabla v - R|^2
    double eps = 0.0;           // int_{Q3 \ void} dist^2(nabla v, SO(3))
    double dominant_volume = 0.0;
    double area = 0.0, volume = 0.0; // classification stats carried through
};

struct RigidityProbeResult {
    std::vector<CuboidProbe> cuboids;
    // |R_i - R_{i+1}|^2 for consecutive good/bad pairs, keyed by left index.
    std::vector<std::pair<int, double>> adjacent_rotation_diff_sq;
};

// Empirical probe of the local rigidity behavior: per good/bad cuboid the
// best-fit rotation on the dominant voxel component of the void complement
// (6-connectivity), the sym/full residuals, and the localized elastic
// energies; all integrals in physical measure.
RigidityProbeResult rigidity_probe(const Deformation3& def, const VoidSet& voids,
                                   const CuboidPartition& part,
                                   const std::vector<CuboidStats>& stats,
                                   const ElasticDensity& density);

} // namespace rodvoids

#endif
