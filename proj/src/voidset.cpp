#include "rodvoids/voidset.hpp"

#include <cmath>

#include "rodvoids/errors.hpp"

namespace rodvoids {

RodDomain RodDomain::make(double L, double h, int n1, int n2, int n3) {
    if (L <= 0.0 || h <= 0.0 || h >= 1.0)
        throw InvalidInputError("E_BAD_DOMAIN", "domain needs L > 0 and h in (0,1)");
    if (n1 < 1 || n2 < 1 || n3 < 1 || n2 != n3)
        throw InvalidInputError("E_BAD_DOMAIN", "grid needs n1,n2,n3 >= 1 and n2 == n3");
    RodDomain d;
    d.L = L;
    d.h = h;
    d.n1 = n1;
    d.n2 = n2;
    d.n3 = n3;
    return d;
}

RodDomain RodDomain::with_policy(double L, double h, int n_cross) {
    const int n1 = std::max(1, static_cast<int>(std::lround(n_cross * L / h)));
    return make(L, h, n1, n_cross, n_cross);
}

namespace {

bool ball_contains(const Ball& b, const Eigen::Vector3d& p) {
    return (p - b.center).squaredNorm() < b.r * b.r;
}

} // namespace

void VoidSet::validate(const RodDomain& dom) const {
    const double half = dom.h / 2.0;
    for (const Ball& b : balls) {
        if (b.r <= 0.0)
            throw InvalidInputError("E_BAD_VOID", "ball radius must be positive");
        const bool inside = b.center.x() - b.r > 0.0 && b.center.x() + b.r < dom.L &&
                            std::abs(b.center.y()) + b.r < half &&
                            std::abs(b.center.z()) + b.r < half;
        if (!inside)
            throw InvalidInputError("E_BAD_VOID",
                                    "ball must be compactly contained in the physical rod");
    }
    for (size_t i = 0; i < balls.size(); ++i)
        for (size_t j = i + 1; j < balls.size(); ++j)
            if ((balls[i].center - balls[j].center).norm() <= balls[i].r + balls[j].r)
                throw InvalidInputError("E_BAD_VOID", "balls must be pairwise disjoint");

    for (const Slab& s : slabs)
        if (!(0.0 <= s.lo && s.lo < s.hi && s.hi <= dom.L))
            throw InvalidInputError("E_BAD_VOID", "slab must satisfy 0 <= lo < hi <= L");

    for (const BoxPrimitive& b : boxes) {
        if (!(0.0 <= b.lo.x() && b.lo.x() < b.hi.x() && b.hi.x() <= dom.L))
            throw InvalidInputError("E_BAD_VOID", "box must satisfy 0 <= lo < hi <= L axially");
        const bool spans = b.lo.y() <= -half && b.hi.y() >= half && b.lo.z() <= -half &&
                           b.hi.z() >= half;
        if (!spans)
            throw InvalidInputError(
                "E_BAD_VOID",
                "boxes are restricted to slab-like pieces spanning the full cross-section");
    }

    if (voxel_mask) {
        const VoxelMask& m = *voxel_mask;
        if (m.n1 != dom.n1 || m.n2 != dom.n2 || m.n3 != dom.n3 ||
            m.inside.size() != static_cast<size_t>(dom.element_count()))
            throw InvalidInputError("E_BAD_VOID", "voxel mask does not match the grid");
        if (has_primitives()) {
            const VoxelMask derived = make_voxel_mask(*this, dom);
            for (int e = 0; e < dom.element_count(); ++e)
                if (derived.inside[e] != m.inside[e])
                    throw InvalidInputError(
                        "E_BAD_VOID",
                        "voxel mask inconsistent with primitives under center sampling");
        }
    }
}

bool VoidSet::contains_physical(const Eigen::Vector3d& p, const RodDomain& dom) const {
    if (has_primitives()) {
        for (const Slab& s : slabs)
            if (p.x() > s.lo && p.x() < s.hi) return true;
        for (const BoxPrimitive& b : boxes)
            if (p.x() > b.lo.x() && p.x() < b.hi.x()) return true;
        for (const Ball& b : balls)
            if (ball_contains(b, p)) return true;
        return false;
    }
    if (voxel_mask) {
        const int i = std::clamp(static_cast<int>(p.x() / dom.dx1()), 0, dom.n1 - 1);
        const int j =
            std::clamp(static_cast<int>((p.y() / dom.h + 0.5) / dom.dx2()), 0, dom.n2 - 1);
        const int k =
            std::clamp(static_cast<int>((p.z() / dom.h + 0.5) / dom.dx3()), 0, dom.n3 - 1);
        return voxel_mask->at(i, j, k);
    }
    return false;
}

double VoidSet::boundary_area_in(const AxisRegion& region) const {
    const double cross_area = 4.0 * region.cross_half * region.cross_half;
    double area = 0.0;
    auto slab_faces = [&](double lo, double hi) {
        if (lo > region.x_lo && lo < region.x_hi) area += cross_area;
        if (hi > region.x_lo && hi < region.x_hi) area += cross_area;
    };
    for (const Slab& s : slabs) slab_faces(s.lo, s.hi);
    for (const BoxPrimitive& b : boxes) slab_faces(b.lo.x(), b.hi.x());
    for (const Ball& b : balls) {
        const double lo = std::max(region.x_lo, b.center.x() - b.r);
        const double hi = std::min(region.x_hi, b.center.x() + b.r);
        if (hi <= lo) continue;
        const bool lateral = std::abs(b.center.y()) + b.r <= region.cross_half &&
                             std::abs(b.center.z()) + b.r <= region.cross_half;
        if (!lateral)
            throw NumericalError("E_REGION_QUERY_UNSUPPORTED",
                                 "analytic ball queries need lateral containment in the region");
        area += 2.0 * M_PI * b.r * (hi - lo); // spherical zone
    }
    return area;
}

double VoidSet::volume_in(const AxisRegion& region) const {
    const double cross_area = 4.0 * region.cross_half * region.cross_half;
    double vol = 0.0;
    auto slab_volume = [&](double lo, double hi) {
        const double a = std::max(lo, region.x_lo), b = std::min(hi, region.x_hi);
        if (b > a) vol += (b - a) * cross_area;
    };
    for (const Slab& s : slabs) slab_volume(s.lo, s.hi);
    for (const BoxPrimitive& b : boxes) slab_volume(b.lo.x(), b.hi.x());
    for (const Ball& b : balls) {
        const double lo = std::max(region.x_lo, b.center.x() - b.r);
        const double hi = std::min(region.x_hi, b.center.x() + b.r);
        if (hi <= lo) continue;
        const bool lateral = std::abs(b.center.y()) + b.r <= region.cross_half &&
                             std::abs(b.center.z()) + b.r <= region.cross_half;
        if (!lateral)
            throw NumericalError("E_REGION_QUERY_UNSUPPORTED",
                                 "analytic ball queries need lateral containment in the region");
        // slice integral of pi (r^2 - (x-c)^2) dx
        auto antider = [&](double x) {
            const double t = x - b.center.x();
            return M_PI * (b.r * b.r * t - t * t * t / 3.0);
        };
        vol += antider(hi) - antider(lo);
    }
    return vol;
}

VoxelMask make_voxel_mask(const VoidSet& voids, const RodDomain& dom) {
    VoxelMask m;
    m.n1 = dom.n1;
    m.n2 = dom.n2;
    m.n3 = dom.n3;
    m.inside.assign(dom.element_count(), 0);
    for (int i = 0; i < dom.n1; ++i)
        for (int j = 0; j < dom.n2; ++j)
            for (int k = 0; k < dom.n3; ++k) {
                const Eigen::Vector3d p = dom.to_physical(dom.element_center(i, j, k));
                bool inside = false;
                for (const Slab& s : voids.slabs)
                    inside = inside || (p.x() > s.lo && p.x() < s.hi);
                for (const BoxPrimitive& b : voids.boxes)
                    inside = inside || (p.x() > b.lo.x() && p.x() < b.hi.x());
                for (const Ball& b : voids.balls) inside = inside || ball_contains(b, p);
                if (inside) m.inside[(i * dom.n2 + j) * dom.n3 + k] = 1;
            }
    return m;
}

} // namespace rodvoids
