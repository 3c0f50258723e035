#ifndef RODVOIDS_CELL_PROBLEM_HPP
#define RODVOIDS_CELL_PROBLEM_HPP

#include <array>

#include <Eigen/Dense>

#include "rodvoids/material.hpp"

namespace rodvoids {

// Uniform quadrilateral mesh of the cross section S = (-1/2, 1/2)^2 with
// bilinear shape functions and 2x2 Gauss quadrature per element (exact for
// the piecewise-quadratic integrands appearing here).
struct CrossSectionMesh {
    int n = 64; // subdivisions per side

    static CrossSectionMesh uniform(int n);

    int node_count() const { return (n + 1) * (n + 1); }
    int element_count() const { return n * n; }
    int node_index(int i, int j) const { return i * (n + 1) + j; }
    double coord(int i) const { return -0.5 + static_cast<double>(i) / n; }
    double element_size() const { return 1.0 / n; }
    // Sum of element areas; equals 1 up to rounding.
    double total_area() const;
};

// Minimizer data for one skew parameter.
struct CellSolution {
    double value = 0.0;        // the attained minimum, >= 0
    Eigen::VectorXd alpha;     // nodal 3-vector field, layout [3*node + comp]
    CrossSectionMesh mesh;
    double residual = 0.0;     // linear-solve residual (relative infinity norm)
};

// Effective 3x3 stiffness: value(hat(a)) = a^T B a.
struct Q2Matrix {
    Eigen::Matrix3d B = Eigen::Matrix3d::Zero();

    double eval(const Eigen::Vector3d& a) const { return a.dot(B * a); }
    double eval(const SkewParam& A) const { return eval(A.a); }
};

// Cross-sectional minimization for a single skew parameter. The kernel of
// constants is removed by constraining the mean of each component of alpha
// to zero via Lagrange multipliers; the saddle system is solved by a direct
// sparse factorization.
CellSolution solve_cell(const SkewParam& A, const QuadForm3& q,
                        const CrossSectionMesh& mesh);

// Objective evaluated at a given nodal field (used by consistency and gauge
// checks; independent of the solve path).
double cell_objective(const SkewParam& A, const QuadForm3& q,
                      const CrossSectionMesh& mesh, const Eigen::VectorXd& alpha);

// The three basis minimizers (for hat(e1), hat(e2), hat(e3)) together with
// the polarized stiffness matrix. One factorization serves all three loads.
struct CellBasis {
    Q2Matrix q2;
    CrossSectionMesh mesh;
    std::array<Eigen::VectorXd, 3> alpha;

    // Combined corrector alpha_{hat(a)}(x2, x3) by linearity of the cell
    // problem; bilinear interpolation between nodes.
    Eigen::Vector3d corrector(const Eigen::Vector3d& a, double x2, double x3) const;
};

CellBasis solve_cell_basis(const QuadForm3& q, const CrossSectionMesh& mesh);

// Convenience wrapper returning only the stiffness matrix.
Q2Matrix assemble_q2_matrix(const QuadForm3& q, const CrossSectionMesh& mesh);

} // namespace rodvoids

#endif
