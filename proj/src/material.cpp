#include "rodvoids/material.hpp"

#include <cmath>

#include "rodvoids/errors.hpp"

namespace rodvoids {

namespace {

// log with a C^2 quadratic continuation below j0, so the neo-Hookean
// density stays finite for non-positive determinants.
double log_regularized(double j) {
    constexpr double j0 = 0.1;
    if (j >= j0) return std::log(j);
    const double d = j - j0;
    return std::log(j0) + d / j0 - d * d / (2.0 * j0 * j0);
}

} // namespace

double eval_W(const ElasticDensity& density, const Eigen::Matrix3d& F) {
    if (!F.allFinite())
        throw InvalidInputError("E_NONFINITE_INPUT",
                                "eval_W: deformation gradient has non-finite entries");
    switch (density.kind) {
    case MaterialKind::StVenantKirchhoff: {
        const Eigen::Matrix3d E =
            0.5 * (F.transpose() * F - Eigen::Matrix3d::Identity());
        const double trE = E.trace();
        return density.mu * E.squaredNorm() + 0.5 * density.lambda * trE * trE;
    }
    case MaterialKind::CompressibleNeoHookeanRegularized: {
        const double lj = log_regularized(F.determinant());
        return 0.5 * density.mu * (F.squaredNorm() - 3.0 - 2.0 * lj) +
               0.5 * density.lambda * lj * lj;
    }
    }
    throw InvalidInputError("E_UNKNOWN_MATERIAL", "eval_W: unknown material kind");
}

double dist_SO3(const Eigen::Matrix3d& F) {
    if (!F.allFinite())
        throw InvalidInputError("E_NONFINITE_INPUT",
                                "dist_SO3: matrix has non-finite entries");
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(F);
    Eigen::Vector3d s = svd.singularValues(); // descending
    if (F.determinant() < 0.0) s(2) = -s(2);
    return (s - Eigen::Vector3d::Ones()).norm();
}

Eigen::Matrix3d project_SO3(const Eigen::Matrix3d& F) {
    if (!F.allFinite())
        throw InvalidInputError("E_NONFINITE_INPUT",
                                "project_SO3: matrix has non-finite entries");
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(F, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Vector3d s = svd.singularValues();
    if (s(1) <= 1e-14 * std::max(1.0, s(0)))
        throw NumericalError("E_DEGENERATE_PROJECTION",
                             "project_SO3: rank-deficient input, projection not unique");
    Eigen::Matrix3d U = svd.matrixU(), V = svd.matrixV();
    const double sign = (U * V.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
    return U * Eigen::Vector3d(1.0, 1.0, sign).asDiagonal() * V.transpose();
}

double eval_Q3(const QuadForm3& q, const Eigen::Matrix3d& G) {
    const Eigen::Matrix3d S = 0.5 * (G + G.transpose());
    const double trG = G.trace();
    return 2.0 * q.mu * S.squaredNorm() + q.lambda * trG * trG;
}

double eval_Q3_bilinear(const QuadForm3& q, const Eigen::Matrix3d& G,
                        const Eigen::Matrix3d& H) {
    const Eigen::Matrix3d SG = 0.5 * (G + G.transpose());
    const Eigen::Matrix3d SH = 0.5 * (H + H.transpose());
    return 2.0 * q.mu * SG.cwiseProduct(SH).sum() + q.lambda * G.trace() * H.trace();
}

} // namespace rodvoids
