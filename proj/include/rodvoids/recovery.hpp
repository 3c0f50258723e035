#ifndef RODVOIDS_RECOVERY_HPP
#define RODVOIDS_RECOVERY_HPP

#include <vector>

#include "rodvoids/cell_problem.hpp"
#include "rodvoids/rod1d.hpp"
#include "rodvoids/rod3d.hpp"

namespace rodvoids {

// Slab void set of the recovery construction: the limit voids I plus a
// width-2h slab around every breakpoint. Fails if h is too large for the
// widened intervals to stay disjoint and inside the rod.
VoidSet build_recovery_void(const LimitConfig& cfg, double h, const RodDomain& dom);

// Bending-rod ansatz on the grid:
//   y_h(x) = y(x1) + h x2 d2(x1) + h x3 d3(x1) + h^2 alpha_{A(x1)}(x2, x3)
// outside the void, T_h(id) at nodes interior to the discrete void. A node
// counts as interior when all incident elements are void elements, so each
// elastic element interpolates pure-ansatz values. Near segment ends the
// ansatz continues linearly along the tangent. `include_corrector = false`
// drops the h^2 term (ablation).
Deformation3 build_recovery_deformation(const LimitConfig& cfg, const CellBasis& cell,
                                        double h, const RodDomain& dom,
                                        bool include_corrector = true);

struct RecoveryPair {
    double h = 0.0;
    RodDomain dom;
    VoidSet voids;
    Deformation3 def;
};

RecoveryPair build_recovery_pair(const LimitConfig& cfg, const CellBasis& cell, double h,
                                 const RodDomain& dom, bool include_corrector = true);

struct ConvergenceRow {
    double h = 0.0;
    double elastic = 0.0, perimeter = 0.0, curvature = 0.0, total = 0.0;
    double e0 = 0.0;
    double rel_gap = 0.0;
    // tau-convergence proxies on the recovery sequence
    double sup_deviation = 0.0;     // max over material nodes of |y_h - ybar|
    double grad_deviation_sq = 0.0; // int over material of |nabla_h y_h - Rbar|^2
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    double e0 = 0.0;
};

// Recovery sweep over a decreasing h list with the grid policy
// n1 = n_cross * L / h and the curvature weight kappa_h = h^kappa_exponent.
ConvergenceStudy convergence_study(const LimitConfig& cfg, const ElasticDensity& density,
                                   const CellBasis& cell, int n_cross,
                                   const std::vector<double>& h_list,
                                   double kappa_exponent, bool include_corrector = true);

} // namespace rodvoids

#endif
