#include "doctest.h"

#include <cmath>

#include "rodvoids/errors.hpp"
#include "rodvoids/fixtures.hpp"
#include "rodvoids/recovery.hpp"
#include "rodvoids/so3.hpp"

using namespace rodvoids;
using Eigen::Matrix3d;
using Eigen::Vector3d;

namespace {

const ElasticDensity kStvk{MaterialKind::StVenantKirchhoff, 1.0, 1.0};
const ElasticDensity kStvk0{MaterialKind::StVenantKirchhoff, 0.0, 1.0};

CellBasis basis(double lambda, double mu, int n = 32) {
    return solve_cell_basis({lambda, mu}, CrossSectionMesh::uniform(n));
}

} // namespace

TEST_CASE("recovery void construction") {
    const double h = 1.0 / 16;
    const RodDomain dom = RodDomain::with_policy(1.0, h, 4);

    SUBCASE("single breakpoint becomes one widened slab") {
        const LimitConfig cfg = make_fixture("kink", 1.0, h / 2, 10.0);
        const VoidSet voids = build_recovery_void(cfg, h, dom);
        REQUIRE(voids.slabs.size() == 1);
        CHECK(voids.slabs[0].lo == doctest::Approx(7.0 / 12.0 - h).epsilon(1e-15));
        CHECK(voids.slabs[0].hi == doctest::Approx(7.0 / 12.0 + h).epsilon(1e-15));
    }

    SUBCASE("void interval carries over exactly") {
        const LimitConfig cfg = make_fixture("straight-with-void", 1.0, h / 2, 10.0);
        const VoidSet voids = build_recovery_void(cfg, h, dom);
        REQUIRE(voids.slabs.size() == 1);
        CHECK(voids.slabs[0].lo == 0.35);
        CHECK(voids.slabs[0].hi == 0.6);
    }

    SUBCASE("perimeter equals endpoint count plus twice the breakpoints") {
        VoidIntervals iv;
        iv.intervals.push_back({0.3, 0.45});
        const LimitConfig cfg = LimitConfig::from_frame_field(
            1.0, [](double) { return Matrix3d::Identity(); }, Vector3d::Zero(), h / 2,
            10.0, {0.8}, iv);
        for (double hh : {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64}) {
            const RodDomain d = RodDomain::with_policy(1.0, hh, 4);
            const VoidSet voids = build_recovery_void(cfg, hh, d);
            CHECK(eval_surface(voids, d, 0.0).first == 4.0); // 2 + 2*1, exactly
        }
    }

    SUBCASE("h too large is rejected") {
        VoidIntervals iv;
        iv.intervals.push_back({0.3, 0.45});
        const LimitConfig cfg = LimitConfig::from_frame_field(
            1.0, [](double) { return Matrix3d::Identity(); }, Vector3d::Zero(), 0.01,
            10.0, {0.5}, iv);
        // widened slab (0.5 - h, 0.5 + h) hits the void at h = 0.1
        CHECK_THROWS_AS(build_recovery_void(cfg, 0.1, RodDomain::with_policy(1.0, 0.1, 4)),
                        InvalidInputError);
    }
}

TEST_CASE("straight rod recovers the rest state exactly") {
    const double h = 1.0 / 8;
    const RodDomain dom = RodDomain::with_policy(1.0, h, 4);
    const CellBasis cell = basis(1.0, 1.0, 8);
    const LimitConfig cfg = make_fixture("straight", 1.0, h / 2, 10.0);
    const Deformation3 def = build_recovery_deformation(cfg, cell, h, dom);
    const Deformation3 ref = Deformation3::rest(dom);
    for (size_t i = 0; i < def.y.size(); ++i)
        CHECK((def.y[i] - ref.y[i]).norm() <= 1e-12);
    CHECK(eval_elastic(def, VoidSet{}, kStvk, dom) <= 1e-20);
}

TEST_CASE("sampling must resolve the thickness") {
    const double h = 1.0 / 32;
    const LimitConfig coarse = make_fixture("arc", 1.0, 1.0 / 8, 10.0); // ds > h
    CHECK_THROWS_AS(build_recovery_deformation(coarse, basis(0.0, 1.0, 8), h,
                                               RodDomain::with_policy(1.0, h, 4)),
                    InvalidInputError);
}

TEST_CASE("arc recovery approaches the bending-torsion energy from above") {
    const CellBasis cell = basis(0.0, 1.0);
    const LimitConfig cfg = make_fixture("arc", 1.0, 1.0 / 256, 10.0);
    const double e0 = eval_E0(cfg, cell.q2).total();
    CHECK(e0 == doctest::Approx(0.5 * cell.q2.B(2, 2) * 0.81).epsilon(1e-10));

    double prev_gap = std::numeric_limits<double>::infinity();
    for (double h : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
        const RodDomain dom = RodDomain::with_policy(1.0, h, 8);
        const RecoveryPair pair = build_recovery_pair(cfg, cell, h, dom);
        const double elastic = eval_elastic(pair.def, pair.voids, kStvk0, dom);
        const double gap = std::abs(elastic - e0) / e0;
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap <= 0.10); // within 10 % already at h = 1/32
}

TEST_CASE("corrector ablation strictly raises the torsion-bearing energy") {
    const CellBasis cell = basis(0.0, 1.0);
    const LimitConfig cfg = make_fixture("helix", 1.0, 1.0 / 256, 10.0);
    const double h = 1.0 / 32;
    const RodDomain dom = RodDomain::with_policy(1.0, h, 8);
    const double with_corr = eval_elastic(
        build_recovery_deformation(cfg, cell, h, dom, true), VoidSet{}, kStvk0, dom);
    const double without =
        eval_elastic(build_recovery_deformation(cfg, cell, h, dom, false), VoidSet{},
                     kStvk0, dom);
    CHECK(without >= 1.01 * with_corr);
}

TEST_CASE("convergence study on the void fixture is exact for every h") {
    const CellBasis cell = basis(1.0, 1.0, 16);
    const LimitConfig cfg = make_fixture("straight-with-void", 1.0, 1.0 / 64, 10.0);
    const ConvergenceStudy study = convergence_study(
        cfg, kStvk, cell, 4, {1.0 / 8, 1.0 / 16, 1.0 / 32}, 51.0 / 25.0);
    CHECK(study.e0 == 2.0);
    for (const auto& row : study.rows) {
        CHECK(row.total == 2.0);
        CHECK(row.rel_gap == 0.0);
        CHECK(row.curvature == 0.0);
    }
}

TEST_CASE("tau-convergence proxies shrink along the sweep") {
    const CellBasis cell = basis(0.0, 1.0, 16);
    const LimitConfig cfg = make_fixture("arc", 1.0, 1.0 / 256, 10.0);
    const ConvergenceStudy study =
        convergence_study(cfg, kStvk0, cell, 4, {1.0 / 8, 1.0 / 16, 1.0 / 32}, 51.0 / 25.0);
    for (size_t i = 0; i + 1 < study.rows.size(); ++i) {
        CHECK(study.rows[i + 1].sup_deviation < study.rows[i].sup_deviation);
        CHECK(study.rows[i + 1].grad_deviation_sq < study.rows[i].grad_deviation_sq);
    }
    // the deformation stays within the admissible bound
}

TEST_CASE("sup bound carries over to the recovery sequence") {
    const CellBasis cell = basis(0.0, 1.0, 8);
    const LimitConfig cfg = make_fixture("arc", 1.0, 1.0 / 64, 10.0);
    for (double h : {1.0 / 8, 1.0 / 16}) {
        const RodDomain dom = RodDomain::with_policy(1.0, h, 4);
        const Deformation3 def = build_recovery_deformation(cfg, cell, h, dom);
        CHECK(def.max_norm() <= cfg.sup_bound);
    }

    // a configuration at the bound is rejected with the margin check
    LimitConfig tight = make_fixture("straight", 1.0, 1.0 / 64, 1.0);
    CHECK_THROWS_AS(build_recovery_deformation(tight, cell, 1.0 / 16,
                                               RodDomain::with_policy(1.0, 1.0 / 16, 4)),
                    PreconditionNotMet);
}
