#include "rodvoids/rod3d.hpp"

#include <cmath>
#include <queue>

#include "rodvoids/errors.hpp"

namespace rodvoids {

namespace {

struct GaussData {
    // local coordinates in [0,1]^3 and shape gradients for the 8 nodes
    double loc[8][3];
};

const GaussData& gauss_points() {
    static const GaussData data = [] {
        GaussData d;
        const double g = 0.5 / std::sqrt(3.0);
        int idx = 0;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c, ++idx) {
                    d.loc[idx][0] = 0.5 + (a ? g : -g);
                    d.loc[idx][1] = 0.5 + (b ? g : -g);
                    d.loc[idx][2] = 0.5 + (c ? g : -g);
                }
        return d;
    }();
    return data;
}

// Rescaled gradient of the trilinear interpolant at one Gauss point.
Eigen::Matrix3d rescaled_gradient(const Deformation3& def, int ei, int ej, int ek,
                                  const double* loc) {
    const RodDomain& dom = def.dom;
    const double s = loc[0], t = loc[1], u = loc[2];
    Eigen::Matrix3d G = Eigen::Matrix3d::Zero();
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                const double Na = a ? s : 1.0 - s;
                const double Nb = b ? t : 1.0 - t;
                const double Nc = c ? u : 1.0 - u;
                const double da = a ? 1.0 : -1.0;
                const double db = b ? 1.0 : -1.0;
                const double dc = c ? 1.0 : -1.0;
                const Eigen::Vector3d& yn = def.at(ei + a, ej + b, ek + c);
                G.col(0) += (da * Nb * Nc / dom.dx1()) * yn;
                G.col(1) += (Na * db * Nc / dom.dx2()) * yn;
                G.col(2) += (Na * Nb * dc / dom.dx3()) * yn;
            }
    G.col(1) /= dom.h;
    G.col(2) /= dom.h;
    return G;
}

void check_same_grid(const Deformation3& def, const RodDomain& dom) {
    const RodDomain& d = def.dom;
    if (d.L != dom.L || d.h != dom.h || d.n1 != dom.n1 || d.n2 != dom.n2 || d.n3 != dom.n3)
        throw InvalidInputError("E_GRID_MISMATCH",
                                "deformation grid does not match the domain");
}

VoxelMask element_mask(const VoidSet& voids, const RodDomain& dom) {
    if (voids.voxel_mask && !voids.has_primitives()) return *voids.voxel_mask;
    return make_voxel_mask(voids, dom);
}

} // namespace

Deformation3 Deformation3::rest(const RodDomain& dom) {
    Deformation3 def;
    def.dom = dom;
    def.y.resize(dom.node_count());
    for (int i = 0; i <= dom.n1; ++i)
        for (int j = 0; j <= dom.n2; ++j)
            for (int k = 0; k <= dom.n3; ++k)
                def.y[dom.node_index(i, j, k)] = dom.to_physical(dom.node(i, j, k));
    return def;
}

double Deformation3::max_norm() const {
    double m = 0.0;
    for (const auto& v : y) m = std::max(m, v.norm());
    return m;
}

double eval_elastic(const Deformation3& def, const VoidSet& voids,
                    const ElasticDensity& density, const RodDomain& dom) {
    check_same_grid(def, dom);
    const VoxelMask mask = element_mask(voids, dom);
    const double w_gauss = dom.dx1() * dom.dx2() * dom.dx3() / 8.0;
    const GaussData& gd = gauss_points();

    double total = 0.0;
    for (int i = 0; i < dom.n1; ++i)
        for (int j = 0; j < dom.n2; ++j)
            for (int k = 0; k < dom.n3; ++k) {
                if (mask.at(i, j, k)) continue;
                double elem = 0.0;
                for (int g = 0; g < 8; ++g)
                    elem += eval_W(density, rescaled_gradient(def, i, j, k, gd.loc[g]));
                total += elem * w_gauss;
            }
    return total / (dom.h * dom.h);
}

std::pair<double, double> eval_surface(const VoidSet& voids, const RodDomain& dom,
                                       double kappa_h) {
    voids.validate(dom);
    const double h = dom.h;
    if (voids.has_primitives()) {
        double perimeter_phys = 0.0;
        double curvature_integral = 0.0;
        auto slab_faces = [&](double lo, double hi) {
            if (lo > 0.0 && lo < dom.L) perimeter_phys += h * h;
            if (hi > 0.0 && hi < dom.L) perimeter_phys += h * h;
        };
        for (const Slab& s : voids.slabs) slab_faces(s.lo, s.hi);
        for (const BoxPrimitive& b : voids.boxes) slab_faces(b.lo.x(), b.hi.x());
        for (const Ball& b : voids.balls) {
            perimeter_phys += 4.0 * M_PI * b.r * b.r;
            curvature_integral += 8.0 * M_PI; // int |A|^2 = (2/r^2) * 4 pi r^2
        }
        return {perimeter_phys / (h * h), kappa_h * curvature_integral / (h * h)};
    }
    if (voids.voxel_mask) {
        if (kappa_h > 0.0)
            throw InvalidInputError(
                "E_UNSUPPORTED_OPERATION",
                "curvature energy is undefined for voxel-only void sets");
        // anisotropic weights in rescaled coordinates: axial faces carry
        // weight 1, cross faces weight 1/h
        const VoxelMask& m = *voids.voxel_mask;
        double perimeter = 0.0;
        const double a1 = dom.dx2() * dom.dx3();
        const double a2 = dom.dx1() * dom.dx3() / dom.h;
        const double a3 = dom.dx1() * dom.dx2() / dom.h;
        for (int i = 0; i < dom.n1; ++i)
            for (int j = 0; j < dom.n2; ++j)
                for (int k = 0; k < dom.n3; ++k) {
                    if (!m.at(i, j, k)) continue;
                    if (i + 1 < dom.n1 && !m.at(i + 1, j, k)) perimeter += a1;
                    if (i > 0 && !m.at(i - 1, j, k)) perimeter += a1;
                    if (j + 1 < dom.n2 && !m.at(i, j + 1, k)) perimeter += a2;
                    if (j > 0 && !m.at(i, j - 1, k)) perimeter += a2;
                    if (k + 1 < dom.n3 && !m.at(i, j, k + 1)) perimeter += a3;
                    if (k > 0 && !m.at(i, j, k - 1)) perimeter += a3;
                }
        return {perimeter, 0.0};
    }
    return {0.0, 0.0};
}

EnergyReport3D eval_Eh(const Deformation3& def, const VoidSet& voids,
                       const ElasticDensity& density, const RodDomain& dom,
                       double kappa_h) {
    EnergyReport3D report;
    report.elastic = eval_elastic(def, voids, density, dom);
    const auto [perimeter, curvature] = eval_surface(voids, dom, kappa_h);
    report.perimeter = perimeter;
    report.curvature = curvature;
    return report;
}

AxisRegion CuboidPartition::q3_shrunk(int i) const {
    const double c = center(i);
    const double half_len = 1.5 * T * h * (1.0 - rho);
    AxisRegion r;
    r.x_lo = c - half_len;
    r.x_hi = c + half_len;
    r.cross_half = (1.0 - rho) * h / 2.0;
    return r;
}

CuboidPartition partition_cuboids(const RodDomain& dom, int T, double rho) {
    if (T < 2)
        throw InvalidInputError("E_BAD_PARTITION", "cuboid multiplier T must be >= 2");
    if (!(rho > 0.0 && rho <= rho0() + 1e-15))
        throw InvalidInputError("E_BAD_PARTITION",
                                "rho must lie in (0, 1 - (19/20)^{1/3}]");
    if (T * dom.h >= dom.L)
        throw InvalidInputError("E_DEGENERATE_PARTITION",
                                "T-cuboid length T*h must be smaller than L");
    CuboidPartition part;
    part.L = dom.L;
    part.h = dom.h;
    part.T = T;
    part.rho = rho;
    part.N = static_cast<int>(std::floor(dom.L / (T * dom.h))) + 1;
    return part;
}

std::vector<CuboidStats> classify_cuboids(const CuboidPartition& part,
                                          const VoidSet& voids, double alpha,
                                          double c_iso_estimate) {
    const double h2 = part.h * part.h;
    const double h3 = h2 * part.h;
    const double one_minus_rho_sq = (1.0 - part.rho) * (1.0 - part.rho);
    std::vector<CuboidStats> stats(part.N);
    for (int i = 1; i <= part.N; ++i) {
        CuboidStats& s = stats[i - 1];
        s.index = i;
        if (!part.interior(i)) {
            s.label = CuboidLabel::Ugly;
            continue;
        }
        const AxisRegion region = part.q3_shrunk(i);
        s.area = voids.boundary_area_in(region);
        s.volume = voids.volume_in(region);
        if (s.area <= alpha * h2) {
            s.label = CuboidLabel::Good;
        } else if (s.area < one_minus_rho_sq * h2 ||
                   (s.area < 2.0 * one_minus_rho_sq * h2 &&
                    s.volume <= 2.0 * c_iso_estimate * h3)) {
            s.label = CuboidLabel::Bad;
        } else {
            s.label = CuboidLabel::Ugly;
        }
    }
    return stats;
}

RigidityProbeResult rigidity_probe(const Deformation3& def, const VoidSet& voids,
                                   const CuboidPartition& part,
                                   const std::vector<CuboidStats>& stats,
                                   const ElasticDensity& density) {
    const RodDomain& dom = def.dom;
    const VoxelMask mask = element_mask(voids, dom);
    const GaussData& gd = gauss_points();
    const double w_phys = dom.h * dom.h * dom.dx1() * dom.dx2() * dom.dx3() / 8.0;

    // Per-element Gauss gradients and distance integrals, computed once.
    const int ne = dom.element_count();
    std::vector<Eigen::Matrix3d> grads(static_cast<size_t>(ne) * 8);
    std::vector<double> dist2(ne, 0.0);
    for (int i = 0; i < dom.n1; ++i)
        for (int j = 0; j < dom.n2; ++j)
            for (int k = 0; k < dom.n3; ++k) {
                const int e = dom.element_index(i, j, k);
                double d2 = 0.0;
                for (int g = 0; g < 8; ++g) {
                    const Eigen::Matrix3d G = rescaled_gradient(def, i, j, k, gd.loc[g]);
                    grads[static_cast<size_t>(e) * 8 + g] = G;
                    const double d = dist_SO3(G);
                    d2 += d * d * w_phys;
                }
                dist2[e] = d2;
            }

    RigidityProbeResult out;
    out.cuboids.resize(part.N);
    for (int ci = 1; ci <= part.N; ++ci) {
        CuboidProbe& probe = out.cuboids[ci - 1];
        probe.index = ci;
        probe.label = stats[ci - 1].label;
        probe.area = stats[ci - 1].area;
        probe.volume = stats[ci - 1].volume;
        if (!part.interior(ci)) continue;

        // localized elastic energy over the full 3T-cuboid, void excluded
        const double q3lo = part.q3_lo(ci), q3hi = part.q3_hi(ci);
        for (int i = 0; i < dom.n1; ++i) {
            const double cx = (i + 0.5) * dom.dx1();
            if (cx < q3lo || cx >= q3hi) continue;
            for (int j = 0; j < dom.n2; ++j)
                for (int k = 0; k < dom.n3; ++k)
                    if (!mask.at(i, j, k)) probe.eps += dist2[dom.element_index(i, j, k)];
        }

        if (probe.label == CuboidLabel::Ugly) continue;

        // dominant component of the void complement inside the shrunken
        // cuboid, on the element grid with 6-connectivity
        const AxisRegion region = part.q3_shrunk(ci);
        auto in_region = [&](int i, int j, int k) {
            const Eigen::Vector3d c = dom.to_physical(dom.element_center(i, j, k));
            return c.x() > region.x_lo && c.x() < region.x_hi &&
                   std::abs(c.y()) < region.cross_half &&
                   std::abs(c.z()) < region.cross_half && !mask.at(i, j, k);
        };
        const int i_lo = std::max(0, static_cast<int>(region.x_lo / dom.dx1()) - 1);
        const int i_hi = std::min(dom.n1 - 1, static_cast<int>(region.x_hi / dom.dx1()) + 1);

        std::vector<int> comp(ne, -1);
        int best_comp = -1, best_size = 0, n_comps = 0;
        for (int i = i_lo; i <= i_hi; ++i)
            for (int j = 0; j < dom.n2; ++j)
                for (int k = 0; k < dom.n3; ++k) {
                    const int e0 = dom.element_index(i, j, k);
                    if (comp[e0] >= 0 || !in_region(i, j, k)) continue;
                    const int id = n_comps++;
                    int size = 0;
                    std::queue<std::array<int, 3>> bfs;
                    bfs.push({i, j, k});
                    comp[e0] = id;
                    while (!bfs.empty()) {
                        const auto [ci_, cj_, ck_] = bfs.front();
                        bfs.pop();
                        ++size;
                        static const int d6[6][3] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                                     {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};
                        for (const auto& d : d6) {
                            const int ni = ci_ + d[0], nj = cj_ + d[1], nk = ck_ + d[2];
                            if (ni < 0 || ni >= dom.n1 || nj < 0 || nj >= dom.n2 ||
                                nk < 0 || nk >= dom.n3)
                                continue;
                            const int en = dom.element_index(ni, nj, nk);
                            if (comp[en] >= 0 || !in_region(ni, nj, nk)) continue;
                            comp[en] = id;
                            bfs.push({ni, nj, nk});
                        }
                    }
                    if (size > best_size) {
                        best_size = size;
                        best_comp = id;
                    }
                }

        if (best_comp < 0) continue; // probe undefined for this cuboid
        probe.defined = true;
        probe.dominant_volume = best_size * dom.h * dom.h * dom.dx1() * dom.dx2() * dom.dx3();

        Eigen::Matrix3d avg = Eigen::Matrix3d::Zero();
        double wsum = 0.0;
        for (int i = i_lo; i <= i_hi; ++i)
            for (int j = 0; j < dom.n2; ++j)
                for (int k = 0; k < dom.n3; ++k) {
                    const int e = dom.element_index(i, j, k);
                    if (comp[e] != best_comp) continue;
                    for (int g = 0; g < 8; ++g) {
                        avg += grads[static_cast<size_t>(e) * 8 + g] * w_phys;
                        wsum += w_phys;
                    }
                }
        const Eigen::Matrix3d R = project_SO3(avg / wsum);
        probe.rotation = R;
        for (int i = i_lo; i <= i_hi; ++i)
            for (int j = 0; j < dom.n2; ++j)
                for (int k = 0; k < dom.n3; ++k) {
                    const int e = dom.element_index(i, j, k);
                    if (comp[e] != best_comp) continue;
                    for (int g = 0; g < 8; ++g) {
                        const Eigen::Matrix3d& G = grads[static_cast<size_t>(e) * 8 + g];
                        probe.residual_full += (G - R).squaredNorm() * w_phys;
                        probe.residual_sym +=
                            (0.5 * (R.transpose() * G + G.transpose() * R) -
                             Eigen::Matrix3d::Identity())
                                .squaredNorm() *
                            w_phys;
                    }
                }
    }

    for (int ci = 2; ci + 1 <= part.N - 1; ++ci) {
        const CuboidProbe& a = out.cuboids[ci - 1];
        const CuboidProbe& b = out.cuboids[ci];
        const bool a_ok = a.label != CuboidLabel::Ugly && a.defined;
        const bool b_ok = b.label != CuboidLabel::Ugly && b.defined;
        if (a_ok && b_ok)
            out.adjacent_rotation_diff_sq.emplace_back(
                ci, (a.rotation - b.rotation).squaredNorm());
    }
    return out;
}

} // namespace rodvoids
