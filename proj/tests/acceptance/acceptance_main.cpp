// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are fixed here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "rodvoids/fixtures.hpp"
#include "rodvoids/io.hpp"
#include "rodvoids/isoperimetry.hpp"
#include "rodvoids/recovery.hpp"
#include "rodvoids/trimesh.hpp"

using namespace rodvoids;
using Eigen::Matrix3d;
using Eigen::Vector3d;

namespace {

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail,
            double seconds) {
    std::printf("[%s] %d %-24s %s (%.2fs)\n", pass ? "PASS" : "FAIL", id, name,
                detail.c_str(), seconds);
    if (!pass) ++failures;
}

void criterion(int id, const char* name, const std::function<std::pair<bool, std::string>()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        std::tie(pass, detail) = body();
    } catch (const std::exception& e) {
        pass = false;
        detail = std::string("exception: ") + e.what();
    }
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(id, name, pass, detail, dt);
}

double torsion_constant_square() {
    double sum = 0.0;
    for (int n = 1; n < 400; n += 2)
        sum += std::tanh(n * M_PI / 2.0) / std::pow(static_cast<double>(n), 5);
    return 1.0 / 3.0 - 64.0 / std::pow(M_PI, 5) * sum;
}

const ElasticDensity kDensity{MaterialKind::StVenantKirchhoff, 0.0, 1.0};
const QuadForm3 kQuad{0.0, 1.0};

} // namespace

int main() {
    // 1. Cell-problem validation against classical rod stiffnesses.
    criterion(1, "cell-problem", []() -> std::pair<bool, std::string> {
        double bend32 = 0, bend64 = 0, bend128 = 0;
        double tor32 = 0, tor64 = 0, tor128 = 0;
        for (int n : {8, 16, 32, 64, 128}) {
            const Q2Matrix B = assemble_q2_matrix(kQuad, CrossSectionMesh::uniform(n));
            if (n == 32) { bend32 = B.B(2, 2); tor32 = B.B(0, 0); }
            if (n == 64) { bend64 = B.B(2, 2); tor64 = B.B(0, 0); }
            if (n == 128) { bend128 = B.B(2, 2); tor128 = B.B(0, 0); }
        }
        (void)bend32; (void)tor32;
        const double bend_extrap = bend128 + (bend128 - bend64) / 3.0;
        const double tor_extrap = tor128 + (tor128 - tor64) / 3.0;
        const double bend_ref = 2.0 * (1.0 / 12.0);
        const double tor_ref = torsion_constant_square();
        const double bend_err = std::abs(bend_extrap - bend_ref) / bend_ref;
        const double tor_err = std::abs(tor_extrap - tor_ref) / tor_ref;
        const bool pass = bend_err <= 1e-3 && tor_err <= 1e-3;
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "bending %.8f vs 1/6 (rel %.2e), torsion %.8f vs %.8f (rel %.2e)",
                      bend_extrap, bend_err, tor_extrap, tor_ref, tor_err);
        return {pass, buf};
    });

    // 2. Surface exactness of recovery voids: 2k + 2m, exact integers.
    criterion(2, "surface-exactness", []() -> std::pair<bool, std::string> {
        struct Case {
            const char* name;
            int k, m;
        };
        bool pass = true;
        std::string detail;
        VoidIntervals iv;
        iv.intervals.push_back({0.3, 0.45});
        const LimitConfig combined = LimitConfig::from_frame_field(
            1.0, [](double) { return Matrix3d::Identity(); }, Vector3d::Zero(),
            1.0 / 1024, 10.0, {0.8}, iv);
        const std::vector<std::pair<LimitConfig, double>> cases = {
            {make_fixture("straight-with-void", 1.0, 1.0 / 1024, 10.0), 2.0},
            {make_fixture("kink", 1.0, 1.0 / 1024, 10.0), 2.0},
            {combined, 4.0}};
        for (const auto& [cfg, expected] : cases) {
            for (double h : {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64}) {
                const RodDomain dom = RodDomain::with_policy(cfg.L, h, 4);
                const VoidSet voids = build_recovery_void(cfg, h, dom);
                const auto [per, curv] = eval_surface(voids, dom, std::pow(h, 2.04));
                if (per != expected || curv != 0.0) {
                    pass = false;
                    detail = "mismatch at h = " + format_g17(h);
                }
            }
        }
        if (detail.empty()) detail = "2k + 2m exact for all fixtures and h";
        return {pass, detail};
    });

    // 3. Ball energy: analytic formula exact, icosphere path within 1 %.
    criterion(3, "ball-energy", []() -> std::pair<bool, std::string> {
        const double h = 1.0 / 16, r = h / 4.0;
        const double kappa_h = std::pow(h, 51.0 / 25.0);
        const RodDomain dom = RodDomain::with_policy(1.0, h, 4);
        VoidSet voids;
        voids.balls.push_back({{0.5, 0.0, 0.0}, r});
        const auto [per, curv] = eval_surface(voids, dom, kappa_h);
        const double expected_per = 4.0 * M_PI * r * r / (h * h);
        const double expected_curv = 8.0 * M_PI * kappa_h / (h * h);
        const bool exact = std::abs(per - expected_per) <= 1e-14 * expected_per &&
                           std::abs(curv - expected_curv) <= 1e-14 * expected_curv;

        const TriMesh sphere = TriMesh::icosphere({0.5, 0.0, 0.0}, r, 4);
        const double area_err =
            std::abs(sphere.area() - 4.0 * M_PI * r * r) / (4.0 * M_PI * r * r);
        const double curv_err =
            std::abs(sphere.second_fundamental_form_sq_integral() - 8.0 * M_PI) /
            (8.0 * M_PI);
        const bool discrete = area_err <= 0.01 && curv_err <= 0.01;
        char buf[120];
        std::snprintf(buf, sizeof(buf),
                      "analytic exact: %s; icosphere level 4: area %.3e, |A|^2 %.3e",
                      exact ? "yes" : "no", area_err, curv_err);
        return {exact && discrete, buf};
    });

    // 4. Gamma-limsup trend on the circular arc.
    criterion(4, "limsup-trend", []() -> std::pair<bool, std::string> {
        const CellBasis cell = solve_cell_basis(kQuad, CrossSectionMesh::uniform(64));
        const LimitConfig cfg = make_fixture("arc", 1.0, 1.0 / 1024, 10.0);
        const ConvergenceStudy study =
            convergence_study(cfg, kDensity, cell, 8,
                              {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64}, 51.0 / 25.0);
        bool monotone = true;
        for (size_t i = 0; i + 1 < study.rows.size(); ++i)
            monotone = monotone && study.rows[i + 1].rel_gap < study.rows[i].rel_gap;
        const double final_gap = study.rows.back().rel_gap;
        char buf[160];
        std::snprintf(buf, sizeof(buf), "gaps %.4f %.4f %.4f %.4f, monotone %s",
                      study.rows[0].rel_gap, study.rows[1].rel_gap, study.rows[2].rel_gap,
                      study.rows[3].rel_gap, monotone ? "yes" : "no");
        return {monotone && final_gap <= 0.05, buf};
    });

    // 5. Corrector ablation at h = 1/64.
    criterion(5, "corrector-ablation", []() -> std::pair<bool, std::string> {
        const CellBasis cell = solve_cell_basis(kQuad, CrossSectionMesh::uniform(64));
        const LimitConfig cfg = make_fixture("helix", 1.0, 1.0 / 1024, 10.0);
        const double h = 1.0 / 64;
        const RodDomain dom = RodDomain::with_policy(1.0, h, 8);
        const double with_corr = eval_elastic(
            build_recovery_deformation(cfg, cell, h, dom, true), VoidSet{}, kDensity, dom);
        const double without = eval_elastic(
            build_recovery_deformation(cfg, cell, h, dom, false), VoidSet{}, kDensity,
            dom);
        char buf[120];
        std::snprintf(buf, sizeof(buf), "with %.6f, without %.6f (excess %.1f%%)",
                      with_corr, without, 100.0 * (without / with_corr - 1.0));
        return {without >= 1.01 * with_corr, buf};
    });

    // 6. Isoperimetric exhaustive suite.
    criterion(6, "isoperimetry", []() -> std::pair<bool, std::string> {
        const ExhaustiveScanResult scan = exhaustive_scan_2d(10, 2, 1.0);
        const ExhaustiveScanResult verify =
            exhaustive_scan_2d(10, 2, 1.0, scan.c_hat_strict);
        const bool d1 = exhaustive_check_1d(20);
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "2^20 subsets, %llu eligible, C-hat %.4f, %llu violations; d=1 %s",
                      static_cast<unsigned long long>(scan.eligible), scan.c_hat_strict,
                      static_cast<unsigned long long>(verify.violations),
                      d1 ? "trivial-exact" : "FAILED");
        return {verify.violations == 0 && d1, buf};
    });

    // 7. Cuboid bookkeeping across the h-sweep.
    criterion(7, "cuboid-bookkeeping", []() -> std::pair<bool, std::string> {
        const double alpha = std::pow(4.0 / 100.0, 2.0 / 3.0); // T = 4, c_T = 10
        const std::vector<double> sweep{1.0 / 16, 1.0 / 32, 1.0 / 64};
        bool pass = true;
        std::string detail;
        for (const char* name : {"boundary-void", "kink"}) {
            const LimitConfig cfg = make_fixture(name, 1.0, 1.0 / 1024, 10.0);
            std::vector<int> counts;
            for (double h : sweep) {
                const RodDomain dom = RodDomain::with_policy(1.0, h, 4);
                const VoidSet voids = build_recovery_void(cfg, h, dom);
                const CuboidPartition part = partition_cuboids(dom, 4, rho0());
                int bad_or_ugly = 0;
                for (const auto& s : classify_cuboids(part, voids, alpha, 0.1))
                    if (s.label != CuboidLabel::Good) ++bad_or_ugly;
                counts.push_back(bad_or_ugly);
            }
            for (int c : counts) pass = pass && c == counts.front();
            detail += std::string(name) + ": " + std::to_string(counts[0]) + "/" +
                      std::to_string(counts[1]) + "/" + std::to_string(counts[2]) + "  ";
        }
        // empty void: all interior cuboids good
        const RodDomain dom = RodDomain::with_policy(1.0, 1.0 / 32, 4);
        const CuboidPartition part = partition_cuboids(dom, 4, rho0());
        for (const auto& s : classify_cuboids(part, VoidSet{}, alpha, 0.1))
            if (part.interior(s.index)) pass = pass && s.label == CuboidLabel::Good;
        return {pass, detail + "(empty void all good)"};
    });

    // 8. Rigidity probe scaling on the recovery sequence.
    criterion(8, "rigidity-scaling", []() -> std::pair<bool, std::string> {
        const CellBasis cell = solve_cell_basis(kQuad, CrossSectionMesh::uniform(32));
        const LimitConfig cfg = make_fixture("arc", 1.0, 1.0 / 1024, 10.0);
        std::vector<double> c_sym, c_rot;
        for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
            const RodDomain dom = RodDomain::with_policy(1.0, h, 8);
            const RecoveryPair pair = build_recovery_pair(cfg, cell, h, dom);
            const CuboidPartition part = partition_cuboids(dom, 4, rho0());
            const auto stats = classify_cuboids(part, pair.voids, 0.12, 0.1);
            const auto probe = rigidity_probe(pair.def, pair.voids, part, stats, kDensity);
            double cs = 0.0, cr = 0.0;
            for (const auto& p : probe.cuboids)
                if (p.defined && p.eps > 1e-14)
                    cs = std::max(cs, p.residual_sym / p.eps);
            for (const auto& [i, diff] : probe.adjacent_rotation_diff_sq) {
                const double eps_sum = probe.cuboids[i - 1].eps + probe.cuboids[i].eps;
                if (eps_sum > 1e-14) cr = std::max(cr, diff * h * h * h / eps_sum);
            }
            c_sym.push_back(cs);
            c_rot.push_back(cr);
        }
        auto ratio = [](const std::vector<double>& v) {
            double lo = v[0], hi = v[0];
            for (double x : v) {
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
            return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
        };
        const double rs = ratio(c_sym), rr = ratio(c_rot);
        char buf[180];
        std::snprintf(buf, sizeof(buf),
                      "C_sym {%.3g, %.3g, %.3g} ratio %.2f; C_rot {%.3g, %.3g, %.3g} "
                      "ratio %.2f",
                      c_sym[0], c_sym[1], c_sym[2], rs, c_rot[0], c_rot[1], c_rot[2], rr);
        return {rs <= 10.0 && rr <= 10.0, buf};
    });

    // 9. Algebraic invariant suite.
    criterion(9, "algebraic-invariants", []() -> std::pair<bool, std::string> {
        bool pass = true;
        std::string bad;
        std::uint64_t st = 20260809;

        // frame indifference of W
        const ElasticDensity density{MaterialKind::StVenantKirchhoff, 1.3, 0.7};
        for (int rep = 0; rep < 200; ++rep) {
            Matrix3d F;
            for (int i = 0; i < 9; ++i) F(i / 3, i % 3) = 2.0 * uniform01(st) - 1.0;
            F += Matrix3d::Identity();
            const Matrix3d R = random_rotation(st);
            const double w = eval_W(density, F);
            if (std::abs(eval_W(density, R * F) - w) > 1e-12 * (1.0 + std::abs(w))) {
                pass = false;
                bad += "W-frame ";
                break;
            }
        }

        // frame indifference of the elastic functional
        {
            const RodDomain dom = RodDomain::make(1.0, 0.25, 8, 4, 4);
            Deformation3 def = Deformation3::rest(dom);
            for (auto& y : def.y)
                y += 0.02 * Vector3d(uniform01(st) - 0.5, uniform01(st) - 0.5,
                                     uniform01(st) - 0.5);
            const double base = eval_elastic(def, VoidSet{}, density, dom);
            const Matrix3d Q = random_rotation(st);
            Deformation3 rotated = def;
            for (auto& y : rotated.y) y = Q * y;
            if (std::abs(eval_elastic(rotated, VoidSet{}, density, dom) - base) >
                1e-12 * (1.0 + base)) {
                pass = false;
                bad += "elastic-frame ";
            }
        }

        // finite-difference Hessian vs Q3
        {
            const QuadForm3 q{density.lambda, density.mu};
            for (int rep = 0; rep < 50; ++rep) {
                Matrix3d G;
                for (int i = 0; i < 9; ++i) G(i / 3, i % 3) = 2.0 * uniform01(st) - 1.0;
                G /= G.norm();
                const double t = 1e-3;
                const Matrix3d I = Matrix3d::Identity();
                const double fd =
                    (eval_W(density, I + t * G) + eval_W(density, I - t * G)) / (t * t);
                if (std::abs(fd - eval_Q3(q, G)) >
                    1e-6 * std::max(1.0, std::abs(eval_Q3(q, G)))) {
                    pass = false;
                    bad += "q3-hessian ";
                    break;
                }
            }
        }

        // Q2 homogeneity
        {
            const CrossSectionMesh mesh = CrossSectionMesh::uniform(16);
            const QuadForm3 q{1.0, 1.0};
            for (int rep = 0; rep < 3; ++rep) {
                const Vector3d a(uniform01(st) - 0.5, uniform01(st) - 0.5,
                                 uniform01(st) - 0.5);
                const double v1 = solve_cell(SkewParam(a), q, mesh).value;
                const double v4 = solve_cell(SkewParam(2.0 * a), q, mesh).value;
                if (std::abs(v4 - 4.0 * v1) > 1e-10 * std::max(1.0, v4)) {
                    pass = false;
                    bad += "q2-homogeneity ";
                    break;
                }
            }
        }

        // rigid-motion invariance of the limit energy
        {
            const LimitConfig cfg = make_fixture("helix", 1.0, 1.0 / 256, 10.0);
            Q2Matrix B;
            B.B = Vector3d(0.14, 1.0 / 6, 1.0 / 6).asDiagonal();
            const double base = eval_E0(cfg, B).total();
            LimitConfig moved = cfg;
            const Matrix3d Q = random_rotation(st);
            const Vector3d c(0.3, -0.2, 0.5);
            for (Segment& seg : moved.segments) {
                for (auto& R : seg.rotations) R = (Q * R).eval();
                for (auto& y : seg.positions) y = Q * y + c;
            }
            if (std::abs(eval_E0(moved, B).total() - base) > 1e-12 * (1.0 + base)) {
                pass = false;
                bad += "e0-rigid ";
            }
        }

        // serialization round-trips, byte-exact
        {
            const LimitConfig cfg = make_fixture("helix", 1.0, 1.0 / 128, 10.0);
            const std::string t1 = serialize_limit_config(cfg);
            if (serialize_limit_config(parse_limit_config(t1)) != t1) {
                pass = false;
                bad += "roundtrip-limit ";
            }
            VoidSetFile vf;
            vf.L = 1.0;
            vf.h = 0.125;
            vf.voids.slabs.push_back({0.25, 0.375});
            vf.voids.balls.push_back({{0.7, 0.01, -0.02}, 0.03});
            const std::string t2 = serialize_voidset(vf);
            if (serialize_voidset(parse_voidset(t2)) != t2) {
                pass = false;
                bad += "roundtrip-void ";
            }
            const Deformation3 def =
                Deformation3::rest(RodDomain::with_policy(1.0, 0.125, 4));
            const std::string t3 = serialize_deformation(def);
            if (serialize_deformation(parse_deformation(t3)) != t3) {
                pass = false;
                bad += "roundtrip-def ";
            }
        }

        return {pass, pass ? "all invariants hold" : ("failed: " + bad)};
    });

    std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
                failures);
    return failures == 0 ? 0 : 1;
}
