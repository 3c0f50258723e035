#include "doctest.h"

#include <cmath>

#include "rodvoids/errors.hpp"
#include "rodvoids/material.hpp"

using namespace rodvoids;
using Eigen::Matrix3d;
using Eigen::Vector3d;

namespace {

// Independent oracle for the distance / projection to SO(3): coarse Euler
// sweep followed by Riemannian descent on |F - R|^2. Deliberately avoids the
// SVD route used by the implementation.
Matrix3d best_rotation_oracle(const Matrix3d& F) {
    Matrix3d best = Matrix3d::Identity();
    double best_val = (F - best).squaredNorm();
    const int m = 14;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                const double a = 2.0 * M_PI * i / m;
                const double b = M_PI * (j + 0.5) / m - M_PI / 2.0;
                const double c = 2.0 * M_PI * k / m;
                const Matrix3d R =
                    (Eigen::AngleAxisd(a, Vector3d::UnitZ()) *
                     Eigen::AngleAxisd(b, Vector3d::UnitY()) *
                     Eigen::AngleAxisd(c, Vector3d::UnitX()))
                        .toRotationMatrix();
                const double v = (F - R).squaredNorm();
                if (v < best_val) {
                    best_val = v;
                    best = R;
                }
            }
    // descent: R <- R exp(hat(step * u)) with u the Riemannian gradient
    for (int it = 0; it < 4000; ++it) {
        const Matrix3d W = best.transpose() * F;
        const Vector3d u = unhat(0.5 * (W - W.transpose()));
        if (u.norm() < 1e-12) break;
        double step = 1.0;
        const double f0 = (F - best).squaredNorm();
        for (int ls = 0; ls < 40; ++ls) {
            const Matrix3d cand = best * exp_so3(step * u);
            if ((F - cand).squaredNorm() < f0) {
                best = cand;
                break;
            }
            step *= 0.5;
        }
    }
    return best;
}

Matrix3d random_matrix(std::uint64_t& st, double scale) {
    Matrix3d F;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) F(i, j) = scale * (2.0 * uniform01(st) - 1.0);
    return F;
}

} // namespace

TEST_CASE("hat map basics") {
    std::uint64_t st = 12345;
    for (int rep = 0; rep < 50; ++rep) {
        const Vector3d a(uniform01(st) - 0.5, uniform01(st) - 0.5, uniform01(st) - 0.5);
        const Matrix3d A = hat(a);
        CHECK((A + A.transpose()).norm() == 0.0);
        CHECK(unhat(A) == a);
        const Vector3d v(uniform01(st), uniform01(st), uniform01(st));
        CHECK((A * v - a.cross(v)).norm() < 1e-15);
    }
}

TEST_CASE("energy well and frame indifference") {
    std::uint64_t st = 7;
    for (MaterialKind kind :
         {MaterialKind::StVenantKirchhoff, MaterialKind::CompressibleNeoHookeanRegularized}) {
        ElasticDensity density{kind, 1.3, 0.8};
        CHECK(eval_W(density, Matrix3d::Identity()) == 0.0);
        for (int rep = 0; rep < 200; ++rep) {
            const Matrix3d R = random_rotation(st);
            CHECK(std::abs(eval_W(density, R)) <= 1e-12);
            const Matrix3d F = random_matrix(st, 1.0) + Matrix3d::Identity();
            const double w = eval_W(density, F);
            CHECK(w >= 0.0);
            CHECK(std::abs(eval_W(density, R * F) - w) <= 1e-12 * (1.0 + std::abs(w)));
        }
    }
}

TEST_CASE("StVenantKirchhoff uniaxial stretch against Green-Lagrange oracle") {
    ElasticDensity density{MaterialKind::StVenantKirchhoff, 0.0, 1.0};
    const double t = 0.1;
    // oracle: E = diag(((1+t)^2 - 1)/2, 0, 0), W = mu |E|^2
    const double e11 = ((1.0 + t) * (1.0 + t) - 1.0) / 2.0;
    const double oracle = 1.0 * e11 * e11;
    CHECK(oracle == doctest::Approx(0.011025).epsilon(1e-14));
    const Matrix3d F = Vector3d(1.0 + t, 1.0, 1.0).asDiagonal();
    CHECK(std::abs(eval_W(density, F) - oracle) <= 1e-12);
}

TEST_CASE("dist_SO3 exact cases") {
    CHECK(dist_SO3(Matrix3d::Identity()) == 0.0);
    CHECK(dist_SO3(2.0 * Matrix3d::Identity()) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("dist_SO3 against rotation-grid oracle") {
    std::uint64_t st = 99;
    for (int rep = 0; rep < 5; ++rep) {
        const Matrix3d F = random_matrix(st, 1.0);
        const Matrix3d R = best_rotation_oracle(F);
        CHECK(std::abs(dist_SO3(F) - (F - R).norm()) <= 1e-3);
    }
}

TEST_CASE("project_SO3") {
    std::uint64_t st = 4242;
    for (int rep = 0; rep < 30; ++rep) {
        const Matrix3d R = random_rotation(st);
        CHECK((project_SO3(R) - R).norm() <= 1e-12);
        CHECK((project_SO3(3.0 * R) - R).norm() <= 1e-12);
    }
    // small skew perturbation vs oracle
    for (int rep = 0; rep < 3; ++rep) {
        Vector3d w(uniform01(st) - 0.5, uniform01(st) - 0.5, uniform01(st) - 0.5);
        const Matrix3d F = Matrix3d::Identity() + 0.01 * hat(w.normalized());
        const Matrix3d oracle = best_rotation_oracle(F);
        CHECK((project_SO3(F) - oracle).cwiseAbs().maxCoeff() <= 1e-4);
    }
    // projection lands on SO(3)
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix3d F = random_matrix(st, 1.0) + Matrix3d::Identity();
        const Matrix3d Q = random_rotation(st);
        if (std::abs(F.determinant()) < 0.05) continue;
        CHECK(dist_SO3(project_SO3(F) * Q) <= 1e-12);
    }
}

TEST_CASE("eval_Q3 closed forms") {
    QuadForm3 q{1.0, 1.0};
    std::uint64_t st = 5150;
    for (int rep = 0; rep < 50; ++rep) {
        Vector3d w(uniform01(st), uniform01(st), uniform01(st));
        CHECK(eval_Q3(q, hat(w)) == 0.0);
    }
    CHECK(eval_Q3(q, Matrix3d::Identity()) == doctest::Approx(15.0).epsilon(1e-14));
    // positive on nonzero symmetric matrices (mu > 0, 3 lambda + 2 mu > 0)
    for (int rep = 0; rep < 50; ++rep) {
        Matrix3d G = random_matrix(st, 1.0);
        G = 0.5 * (G + G.transpose()).eval();
        if (G.norm() < 1e-8) continue;
        CHECK(eval_Q3(q, G) > 0.0);
    }
}

TEST_CASE("finite-difference Hessian of W at identity matches Q3") {
    std::uint64_t st = 31337;
    for (MaterialKind kind :
         {MaterialKind::StVenantKirchhoff, MaterialKind::CompressibleNeoHookeanRegularized}) {
        ElasticDensity density{kind, 1.7, 0.9};
        QuadForm3 q{density.lambda, density.mu};
        for (int rep = 0; rep < 20; ++rep) {
            Matrix3d G = random_matrix(st, 1.0);
            G /= G.norm();
            const double t = 1e-3;
            const Matrix3d I = Matrix3d::Identity();
            const double fd =
                (eval_W(density, I + t * G) + eval_W(density, I - t * G)) / (t * t);
            const double exact = eval_Q3(q, G);
            CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
        }
    }
}

TEST_CASE("coercivity on the declared neighborhood") {
    std::uint64_t st = 2024;
    for (MaterialKind kind :
         {MaterialKind::StVenantKirchhoff, MaterialKind::CompressibleNeoHookeanRegularized}) {
        ElasticDensity density{kind, 1.0, 1.0};
        const double c = density.coercivity_constant();
        int checked = 0;
        for (int rep = 0; rep < 10000; ++rep) {
            const Matrix3d R = random_rotation(st);
            Matrix3d S = random_matrix(st, 0.25);
            S = 0.5 * (S + S.transpose()).eval();
            const Matrix3d F = R * (Matrix3d::Identity() + S);
            const double d = dist_SO3(F);
            if (d > density.validity_radius()) continue;
            ++checked;
            CHECK(eval_W(density, F) >= c * d * d - 1e-14);
        }
        CHECK(checked > 9000);
    }
}

TEST_CASE("error paths") {
    ElasticDensity density;
    Matrix3d F = Matrix3d::Identity();
    F(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(eval_W(density, F), InvalidInputError);
    CHECK_THROWS_AS(dist_SO3(F), InvalidInputError);

    Matrix3d rank1 = Matrix3d::Zero();
    rank1(0, 0) = 1.0;
    CHECK_THROWS_AS(project_SO3(rank1), NumericalError);
}
