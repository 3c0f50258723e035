#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "rodvoids/config.hpp"
#include "rodvoids/errors.hpp"
#include "rodvoids/fixtures.hpp"
#include "rodvoids/io.hpp"
#include "rodvoids/isoperimetry.hpp"
#include "rodvoids/recovery.hpp"

namespace rv = rodvoids;

namespace {

struct Ctx {
    rv::ExperimentConfig cfg;
    std::uint64_t config_hash = rv::fnv1a_hash("");
    std::string subcommand;

    std::string header() const {
        std::ostringstream out;
        out << "# rodvoids " << rv::kToolkitVersion << " config_hash=0x" << std::hex
            << config_hash << std::dec << " subcommand=" << subcommand << "\n";
        return out.str();
    }

    void write_output(const std::string& name, const std::string& body) const {
        std::filesystem::create_directories(cfg.output_dir);
        const std::string path = cfg.output_dir + "/" + name;
        rv::write_file(path, header() + body);
        std::cout << "wrote " << path << "\n";
    }

    rv::LimitConfig limit_config(const std::string& override_source) const {
        const std::string source =
            !override_source.empty() ? override_source
            : (!cfg.limit_source.empty() ? cfg.limit_source : "fixture:arc");
        if (source.rfind("fixture:", 0) == 0)
            return rv::make_fixture(source.substr(8), cfg.L, cfg.ds, cfg.M);
        return rv::parse_limit_config(rv::read_file(source));
    }

    rv::QuadForm3 quad_form() const { return {cfg.lambda, cfg.mu}; }
    rv::ElasticDensity density() const { return {cfg.kind, cfg.lambda, cfg.mu}; }
};

std::string label_name(rv::CuboidLabel label) {
    switch (label) {
    case rv::CuboidLabel::Good: return "good";
    case rv::CuboidLabel::Bad: return "bad";
    case rv::CuboidLabel::Ugly: return "ugly";
    }
    return "?";
}

void run_cell_problem(const Ctx& ctx) {
    std::ostringstream out;
    const rv::QuadForm3 q = ctx.quad_form();
    out << "# refinement table\n";
    out << "n,Q2_e1,Q2_e2,Q2_e3\n";
    for (int n : {8, 16, 32, 64, 128}) {
        if (n > ctx.cfg.cell_n) break;
        const rv::Q2Matrix b = rv::assemble_q2_matrix(q, rv::CrossSectionMesh::uniform(n));
        out << n << "," << rv::format_g17(b.B(0, 0)) << "," << rv::format_g17(b.B(1, 1))
            << "," << rv::format_g17(b.B(2, 2)) << "\n";
    }
    const rv::Q2Matrix B =
        rv::assemble_q2_matrix(q, rv::CrossSectionMesh::uniform(ctx.cfg.cell_n));
    out << "# effective stiffness matrix at n = " << ctx.cfg.cell_n << "\n";
    out << "row,c1,c2,c3\n";
    for (int r = 0; r < 3; ++r)
        out << r + 1 << "," << rv::format_g17(B.B(r, 0)) << "," << rv::format_g17(B.B(r, 1))
            << "," << rv::format_g17(B.B(r, 2)) << "\n";
    ctx.write_output("cell_problem.csv", out.str());
}

void run_rod1d_eval(const Ctx& ctx, const std::string& input) {
    const rv::LimitConfig cfg = ctx.limit_config(input);
    const rv::Q2Matrix B = rv::assemble_q2_matrix(
        ctx.quad_form(), rv::CrossSectionMesh::uniform(ctx.cfg.cell_n));
    const rv::EnergyBreakdown1D e = rv::eval_E0(cfg, B);
    std::ostringstream out;
    out << "elastic,void_endpoints,collapsed,total\n";
    out << rv::format_g17(e.elastic) << "," << rv::format_g17(e.void_endpoints) << ","
        << rv::format_g17(e.collapsed) << "," << rv::format_g17(e.total()) << "\n";
    ctx.write_output("rod1d_eval.csv", out.str());
}

void run_rod1d_minimize(const Ctx& ctx) {
    const rv::Q2Matrix B = rv::assemble_q2_matrix(
        ctx.quad_form(), rv::CrossSectionMesh::uniform(ctx.cfg.cell_n));
    rv::ClampedBoundary bc;
    bc.frameL = rv::exp_so3(Eigen::Vector3d(0.0, 0.0, ctx.cfg.clamp_theta));
    if (ctx.cfg.clamp_yL.size() == 3)
        bc.yL = Eigen::Vector3d(ctx.cfg.clamp_yL[0], ctx.cfg.clamp_yL[1],
                                ctx.cfg.clamp_yL[2]);
    else
        bc.yL = Eigen::Vector3d(ctx.cfg.L, 0.0, 0.0);
    const rv::MinimizeE0Result res = rv::minimize_E0(
        bc, ctx.cfg.L, B, ctx.cfg.break_grid, ctx.cfg.max_discontinuities, ctx.cfg.ds);
    std::ostringstream out;
    out << "total,elastic,void_endpoints,collapsed,breaks,voids,candidates\n";
    out << rv::format_g17(res.energy.total()) << "," << rv::format_g17(res.energy.elastic)
        << "," << rv::format_g17(res.energy.void_endpoints) << ","
        << rv::format_g17(res.energy.collapsed) << "," << res.config.breakpoints.size()
        << "," << res.config.voids.intervals.size() << "," << res.candidates_explored
        << "\n";
    ctx.write_output("rod1d_minimize.csv", out.str());
    ctx.write_output("limit_minimized.txt", rv::serialize_limit_config(res.config));
}

void run_rod3d_eval(const Ctx& ctx, const std::string& void_path,
                    const std::string& def_path) {
    rv::VoidSetFile vf;
    if (!void_path.empty()) vf = rv::parse_voidset(rv::read_file(void_path));
    rv::Deformation3 def;
    rv::RodDomain dom;
    if (!def_path.empty()) {
        def = rv::parse_deformation(rv::read_file(def_path));
        dom = def.dom;
    } else {
        const double h = void_path.empty() ? ctx.cfg.h_list.front() : vf.h;
        dom = rv::RodDomain::with_policy(void_path.empty() ? ctx.cfg.L : vf.L, h,
                                         ctx.cfg.n_cross);
        def = rv::Deformation3::rest(dom);
    }
    const double kappa_h = std::pow(dom.h, ctx.cfg.kappa_exponent);
    const rv::EnergyReport3D report =
        rv::eval_Eh(def, vf.voids, ctx.density(), dom, kappa_h);
    std::ostringstream out;
    out << "h,kappa_h,elastic,perimeter,curvature,total\n";
    out << rv::format_g17(dom.h) << "," << rv::format_g17(kappa_h) << ","
        << rv::format_g17(report.elastic) << "," << rv::format_g17(report.perimeter) << ","
        << rv::format_g17(report.curvature) << "," << rv::format_g17(report.total())
        << "\n";
    ctx.write_output("rod3d_eval.csv", out.str());
}

void run_recovery(const Ctx& ctx, const std::string& input, double h_arg) {
    const rv::LimitConfig cfg = ctx.limit_config(input);
    const double h = h_arg > 0.0 ? h_arg : ctx.cfg.h_list.front();
    const rv::CellBasis cell = rv::solve_cell_basis(
        ctx.quad_form(), rv::CrossSectionMesh::uniform(ctx.cfg.cell_n));
    const rv::RodDomain dom = rv::RodDomain::with_policy(cfg.L, h, ctx.cfg.n_cross);
    const rv::RecoveryPair pair = rv::build_recovery_pair(cfg, cell, h, dom);
    const double kappa_h = std::pow(h, ctx.cfg.kappa_exponent);
    const rv::EnergyReport3D report =
        rv::eval_Eh(pair.def, pair.voids, ctx.density(), dom, kappa_h);
    const double e0 = rv::eval_E0(cfg, cell.q2).total();

    std::ostringstream out;
    out << "h,elastic,perimeter,curvature,total,e0\n";
    out << rv::format_g17(h) << "," << rv::format_g17(report.elastic) << ","
        << rv::format_g17(report.perimeter) << "," << rv::format_g17(report.curvature)
        << "," << rv::format_g17(report.total()) << "," << rv::format_g17(e0) << "\n";
    ctx.write_output("recovery.csv", out.str());
    ctx.write_output("recovery_void.txt",
                     rv::serialize_voidset({cfg.L, h, pair.voids}));
    ctx.write_output("recovery_def.txt", rv::serialize_deformation(pair.def));
}

void run_convergence_study(const Ctx& ctx, const std::string& input) {
    const rv::LimitConfig cfg = ctx.limit_config(input);
    const rv::CellBasis cell = rv::solve_cell_basis(
        ctx.quad_form(), rv::CrossSectionMesh::uniform(ctx.cfg.cell_n));
    const rv::ConvergenceStudy study =
        rv::convergence_study(cfg, ctx.density(), cell, ctx.cfg.n_cross, ctx.cfg.h_list,
                              ctx.cfg.kappa_exponent);
    std::ostringstream out;
    out << "h,elastic,perimeter,curvature,total,e0,rel_gap,sup_deviation,grad_deviation_sq\n";
    for (const auto& row : study.rows)
        out << rv::format_g17(row.h) << "," << rv::format_g17(row.elastic) << ","
            << rv::format_g17(row.perimeter) << "," << rv::format_g17(row.curvature) << ","
            << rv::format_g17(row.total) << "," << rv::format_g17(row.e0) << ","
            << rv::format_g17(row.rel_gap) << "," << rv::format_g17(row.sup_deviation)
            << "," << rv::format_g17(row.grad_deviation_sq) << "\n";
    ctx.write_output("convergence_study.csv", out.str());

    std::ostringstream plot;
    plot << "set datafile separator ','\n";
    plot << "set logscale xy\n";
    plot << "set xlabel 'h'\nset ylabel 'relative gap'\n";
    plot << "plot 'convergence_study.csv' using 1:7 with linespoints title 'gap'\n";
    ctx.write_output("convergence_plot.gp", plot.str());
}

void run_isoperimetry(const Ctx& ctx) {
    std::ostringstream out;
    if (ctx.cfg.iso_mode == "exhaustive") {
        if (ctx.cfg.iso_d == 1) {
            const bool ok = rv::exhaustive_check_1d(ctx.cfg.iso_long);
            out << "d,cells,trivial_case_holds\n";
            out << "1," << ctx.cfg.iso_long << "," << (ok ? 1 : 0) << "\n";
        } else {
            const rv::ExhaustiveScanResult res =
                rv::exhaustive_scan_2d(ctx.cfg.iso_long, ctx.cfg.iso_cross, 1.0);
            const rv::ExhaustiveScanResult verify = rv::exhaustive_scan_2d(
                ctx.cfg.iso_long, ctx.cfg.iso_cross, 1.0, res.c_hat_strict);
            out << "d,long_cells,cross_cells,total,eligible,c_hat,violations,max_ratio_overall\n";
            out << "2," << ctx.cfg.iso_long << "," << ctx.cfg.iso_cross << "," << res.total
                << "," << res.eligible << "," << rv::format_g17(res.c_hat_strict) << ","
                << verify.violations << "," << rv::format_g17(res.max_ratio_overall)
                << "\n";
        }
    } else {
        std::uint64_t state = ctx.cfg.seed;
        const int nx = 64, nc = 4;
        double c_hat = ctx.cfg.c_iso;
        int met = 0, violations = 0;
        for (int s = 0; s < ctx.cfg.iso_samples; ++s) {
            const int target = 1 + static_cast<int>(rv::uniform01(state) * 12);
            const rv::VoxelSet blob = rv::random_blob(3, nx, nc, nc, 1.0, target, state);
            const auto check = rv::dominant_component_check(
                blob, blob.sigma(), blob.half_length(), 2, c_hat, ctx.cfg.iso_t0);
            if (!check.precondition_met) continue;
            ++met;
            if (!check.holds) {
                ++violations;
                out << "# re-estimate: sample " << s << " needs C >= "
                    << rv::format_g17(check.required_constant) << "\n";
                c_hat = std::max(c_hat, check.required_constant);
            }
        }
        out << "samples,precondition_met,violations,c_hat_final\n";
        out << ctx.cfg.iso_samples << "," << met << "," << violations << ","
            << rv::format_g17(c_hat) << "\n";
    }
    ctx.write_output("isoperimetry.csv", out.str());
}

void run_rigidity_probe(const Ctx& ctx, const std::string& input) {
    const rv::LimitConfig cfg = ctx.limit_config(input);
    const rv::CellBasis cell = rv::solve_cell_basis(
        ctx.quad_form(), rv::CrossSectionMesh::uniform(ctx.cfg.cell_n));

    std::ostringstream out;
    out << "h,i,label,area,volume,eps,residual_sym,residual_full\n";
    std::ostringstream pairs;
    pairs << "h,i,rot_diff_sq\n";
    std::ostringstream summary;
    summary << "h,bad_or_ugly,C_sym,C_rot\n";

    for (double h : ctx.cfg.h_list) {
        const rv::RodDomain dom = rv::RodDomain::with_policy(cfg.L, h, ctx.cfg.n_cross);
        const rv::RecoveryPair pair = rv::build_recovery_pair(cfg, cell, h, dom);
        const rv::CuboidPartition part = rv::partition_cuboids(dom, ctx.cfg.T, ctx.cfg.rho);
        const auto stats =
            rv::classify_cuboids(part, pair.voids, ctx.cfg.alpha(), ctx.cfg.c_iso);
        const auto probe =
            rv::rigidity_probe(pair.def, pair.voids, part, stats, ctx.density());

        int bad_or_ugly = 0;
        double c_sym = 0.0, c_rot = 0.0;
        for (const auto& p : probe.cuboids) {
            if (p.label != rv::CuboidLabel::Good) ++bad_or_ugly;
            out << rv::format_g17(h) << "," << p.index << "," << label_name(p.label) << ","
                << rv::format_g17(p.area) << "," << rv::format_g17(p.volume) << ","
                << rv::format_g17(p.eps) << "," << rv::format_g17(p.residual_sym) << ","
                << rv::format_g17(p.residual_full) << "\n";
            if (p.defined && p.eps > 1e-14)
                c_sym = std::max(c_sym, p.residual_sym / p.eps);
        }
        for (const auto& [i, diff] : probe.adjacent_rotation_diff_sq) {
            pairs << rv::format_g17(h) << "," << i << "," << rv::format_g17(diff) << "\n";
            const double eps_sum =
                probe.cuboids[i - 1].eps + probe.cuboids[i].eps;
            if (eps_sum > 1e-14)
                c_rot = std::max(c_rot, diff * h * h * h / eps_sum);
        }
        summary << rv::format_g17(h) << "," << bad_or_ugly << "," << rv::format_g17(c_sym)
                << "," << rv::format_g17(c_rot) << "\n";
    }
    ctx.write_output("rigidity_probe.csv", out.str());
    ctx.write_output("rigidity_pairs.csv", pairs.str());
    ctx.write_output("rigidity_summary.csv", summary.str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rodvoids: thin elastic rods with material voids, 3D and 1D energies"};
    app.require_subcommand(1);

    std::string config_path, input, void_path, def_path;
    double h_arg = 0.0;
    app.add_option("-c,--config", config_path, "configuration file (key = value)");

    auto* cell = app.add_subcommand("cell-problem", "effective stiffness from the cross-section");
    auto* r1e = app.add_subcommand("rod1d-eval", "evaluate the 1D energy of a limit configuration");
    r1e->add_option("--input", input, "limit configuration file or fixture:<name>");
    auto* r1m = app.add_subcommand("rod1d-minimize", "search break/void placements under clamps");
    auto* r3e = app.add_subcommand("rod3d-eval", "evaluate the rescaled 3D energy");
    r3e->add_option("--void", void_path, "void set file");
    r3e->add_option("--def", def_path, "deformation file");
    auto* rec = app.add_subcommand("recovery", "build and evaluate one recovery pair");
    rec->add_option("--input", input, "limit configuration file or fixture:<name>");
    rec->add_option("--thickness", h_arg, "thickness h (default: first sweep value)");
    auto* conv = app.add_subcommand("convergence-study", "recovery sweep over the h list");
    conv->add_option("--input", input, "limit configuration file or fixture:<name>");
    auto* iso = app.add_subcommand("isoperimetry-test", "voxel isoperimetric suites");
    auto* rig = app.add_subcommand("rigidity-probe", "cuboid classification and rigidity probe");
    rig->add_option("--input", input, "limit configuration file or fixture:<name>");

    CLI11_PARSE(app, argc, argv);

    try {
        Ctx ctx;
        if (!config_path.empty())
            ctx.cfg = rv::ExperimentConfig::parse_file(config_path, &ctx.config_hash);
        else
            ctx.cfg.validate();

        if (cell->parsed()) ctx.subcommand = "cell-problem";
        else if (r1e->parsed()) ctx.subcommand = "rod1d-eval";
        else if (r1m->parsed()) ctx.subcommand = "rod1d-minimize";
        else if (r3e->parsed()) ctx.subcommand = "rod3d-eval";
        else if (rec->parsed()) ctx.subcommand = "recovery";
        else if (conv->parsed()) ctx.subcommand = "convergence-study";
        else if (iso->parsed()) ctx.subcommand = "isoperimetry-test";
        else if (rig->parsed()) ctx.subcommand = "rigidity-probe";

        if (cell->parsed()) run_cell_problem(ctx);
        else if (r1e->parsed()) run_rod1d_eval(ctx, input);
        else if (r1m->parsed()) run_rod1d_minimize(ctx);
        else if (r3e->parsed()) run_rod3d_eval(ctx, void_path, def_path);
        else if (rec->parsed()) run_recovery(ctx, input, h_arg);
        else if (conv->parsed()) run_convergence_study(ctx, input);
        else if (iso->parsed()) run_isoperimetry(ctx);
        else if (rig->parsed()) run_rigidity_probe(ctx, input);
        return 0;
    } catch (const rv::ConfigError& e) {
        std::cerr << "error: " << e.code << "\n" << e.what() << "\n";
        return 2;
    } catch (const rv::InvalidInputError& e) {
        std::cerr << "error: " << e.code << "\n" << e.what() << "\n";
        return 2;
    } catch (const rv::PreconditionNotMet& e) {
        std::cerr << "error: " << e.code << "\n" << e.what() << "\n";
        return 4;
    } catch (const rv::NumericalError& e) {
        std::cerr << "error: " << e.code << "\n" << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: E_INTERNAL\n" << e.what() << "\n";
        return 3;
    }
}
