#ifndef RODVOIDS_MATERIAL_HPP
#define RODVOIDS_MATERIAL_HPP

#include <Eigen/Dense>

#include "rodvoids/so3.hpp"

namespace rodvoids {

enum class MaterialKind {
    StVenantKirchhoff,
    CompressibleNeoHookeanRegularized,
};

// Stored energy density W with a single well on SO(3).
//
// StVenantKirchhoff:
//   W(F) = mu |E|^2 + (lambda/2) (tr E)^2,  E = (F^T F - Id)/2.
// CompressibleNeoHookeanRegularized:
//   W(F) = (mu/2) (|F|^2 - 3 - 2 lr(det F)) + (lambda/2) lr(det F)^2,
//   where lr is log with a C^2 quadratic continuation below det F = 0.1,
//   keeping W finite on all of R^{3x3}.
//
// Both satisfy frame indifference, {W = 0} = SO(3) near the well, C^2
// regularity, and the coercivity W(F) >= c dist^2(F, SO(3)) on the
// validity neighborhood dist(F, SO(3)) <= 0.5 with c = mu/2.
struct ElasticDensity {
    MaterialKind kind = MaterialKind::StVenantKirchhoff;
    double lambda = 1.0;
    double mu = 1.0;

    double validity_radius() const { return 0.5; }
    double coercivity_constant() const { return 0.5 * mu; }
};

double eval_W(const ElasticDensity& density, const Eigen::Matrix3d& F);

// Euclidean distance of F to SO(3), from the singular values with the
// smallest one negated when det F < 0.
double dist_SO3(const Eigen::Matrix3d& F);

// Special-orthogonal polar factor, the minimizer of |F - R| over SO(3).
// Throws NumericalError for rank-deficient F.
Eigen::Matrix3d project_SO3(const Eigen::Matrix3d& F);

// Quadratic form of linearized elasticity,
//   Q3(G) = 2 mu |sym G|^2 + lambda (tr G)^2 = D^2 W(Id)[G, G].
struct QuadForm3 {
    double lambda = 1.0;
    double mu = 1.0;
};

double eval_Q3(const QuadForm3& q, const Eigen::Matrix3d& G);

// Symmetric bilinear version, q3(G, H) with q3(G, G) = eval_Q3(G).
double eval_Q3_bilinear(const QuadForm3& q, const Eigen::Matrix3d& G,
                        const Eigen::Matrix3d& H);

// Three-parameter skew matrix A = hat(a): a1 = torsion rate, a2 and a3 =
// bending curvatures of the frame along the rod axis.
struct SkewParam {
    Eigen::Vector3d a = Eigen::Vector3d::Zero();

    SkewParam() = default;
    explicit SkewParam(const Eigen::Vector3d& coeffs) : a(coeffs) {}

    Eigen::Matrix3d matrix() const { return hat(a); }
    static SkewParam from_matrix(const Eigen::Matrix3d& A) {
        return SkewParam(unhat(A));
    }
};

} // namespace rodvoids

#endif
