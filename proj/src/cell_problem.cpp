#include "rodvoids/cell_problem.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "rodvoids/errors.hpp"

namespace rodvoids {

namespace {

// Reference-square data for the 2x2 Gauss rule and bilinear shapes.
struct GaussPoint {
    double x2, x3;         // position inside the element
    double weight;         // includes the element area factor
    double N[4];           // shape values, node order (i,j),(i+1,j),(i,j+1),(i+1,j+1)
    double dN2[4], dN3[4]; // shape gradients
};

void element_gauss(const CrossSectionMesh& mesh, int ei, int ej,
                   std::array<GaussPoint, 4>& pts) {
    const double he = mesh.element_size();
    const double x2a = mesh.coord(ei), x3a = mesh.coord(ej);
    const double g = 0.5 / std::sqrt(3.0); // Gauss offsets in element units
    const double loc[2] = {0.5 - g, 0.5 + g};
    int k = 0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b, ++k) {
            const double s = loc[a], t = loc[b]; // in [0,1]
            GaussPoint& p = pts[k];
            p.x2 = x2a + s * he;
            p.x3 = x3a + t * he;
            p.weight = 0.25 * he * he;
            p.N[0] = (1 - s) * (1 - t);
            p.N[1] = s * (1 - t);
            p.N[2] = (1 - s) * t;
            p.N[3] = s * t;
            p.dN2[0] = -(1 - t) / he; p.dN3[0] = -(1 - s) / he;
            p.dN2[1] = (1 - t) / he;  p.dN3[1] = -s / he;
            p.dN2[2] = -t / he;       p.dN3[2] = (1 - s) / he;
            p.dN2[3] = t / he;        p.dN3[3] = s / he;
        }
    }
}

// First column of the cell-problem matrix: hat(a) (0, x2, x3)^T.
Eigen::Vector3d forcing_column(const Eigen::Vector3d& a, double x2, double x3) {
    return {a.y() * x3 - a.z() * x2, -a.x() * x3, a.x() * x2};
}

int local_node(const CrossSectionMesh& mesh, int ei, int ej, int k) {
    static const int di[4] = {0, 1, 0, 1};
    static const int dj[4] = {0, 0, 1, 1};
    return mesh.node_index(ei + di[k], ej + dj[k]);
}

struct AssembledCell {
    Eigen::SparseMatrix<double> stiffness;
    Eigen::VectorXd mass; // per-node shape integrals, sum = 1
    int ndof = 0;
    // Load vector for a given skew parameter; linear in a and derived from
    // the same Gauss loop as the stiffness.
    Eigen::VectorXd load(const CrossSectionMesh& mesh, const QuadForm3& q,
                         const Eigen::Vector3d& a) const;
};

Eigen::VectorXd AssembledCell::load(const CrossSectionMesh& mesh, const QuadForm3& q,
                                    const Eigen::Vector3d& a) const {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(ndof);
    std::array<GaussPoint, 4> pts;
    for (int ei = 0; ei < mesh.n; ++ei) {
        for (int ej = 0; ej < mesh.n; ++ej) {
            element_gauss(mesh, ei, ej, pts);
            for (const GaussPoint& p : pts) {
                const Eigen::Vector3d c0 = forcing_column(a, p.x2, p.x3);
                Eigen::Matrix3d M0 = Eigen::Matrix3d::Zero();
                M0.col(0) = c0;
                for (int k = 0; k < 4; ++k) {
                    const int node = local_node(mesh, ei, ej, k);
                    for (int c = 0; c < 3; ++c) {
                        Eigen::Matrix3d D = Eigen::Matrix3d::Zero();
                        D(c, 1) = p.dN2[k];
                        D(c, 2) = p.dN3[k];
                        f(3 * node + c) += p.weight * eval_Q3_bilinear(q, M0, D);
                    }
                }
            }
        }
    }
    return f;
}

AssembledCell assemble(const QuadForm3& q, const CrossSectionMesh& mesh) {
    if (mesh.n < 1)
        throw InvalidInputError("E_BAD_MESH", "cell problem: mesh must have n >= 1");
    AssembledCell out;
    out.ndof = 3 * mesh.node_count();

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(mesh.element_count()) * 144);

    std::array<GaussPoint, 4> pts;
    out.mass = Eigen::VectorXd::Zero(mesh.node_count());
    for (int ei = 0; ei < mesh.n; ++ei) {
        for (int ej = 0; ej < mesh.n; ++ej) {
            element_gauss(mesh, ei, ej, pts);
            Eigen::Matrix<double, 12, 12> Ke = Eigen::Matrix<double, 12, 12>::Zero();
            for (const GaussPoint& p : pts) {
                Eigen::Matrix3d D[12];
                for (int k = 0; k < 4; ++k) {
                    for (int c = 0; c < 3; ++c) {
                        Eigen::Matrix3d& Dk = D[3 * k + c];
                        Dk.setZero();
                        Dk(c, 1) = p.dN2[k];
                        Dk(c, 2) = p.dN3[k];
                    }
                }
                for (int u = 0; u < 12; ++u)
                    for (int v = u; v < 12; ++v) {
                        const double val = p.weight * eval_Q3_bilinear(q, D[u], D[v]);
                        Ke(u, v) += val;
                        if (v != u) Ke(v, u) += val;
                    }
                for (int k = 0; k < 4; ++k)
                    out.mass(local_node(mesh, ei, ej, k)) += p.weight * p.N[k];
            }
            for (int ku = 0; ku < 4; ++ku)
                for (int cu = 0; cu < 3; ++cu)
                    for (int kv = 0; kv < 4; ++kv)
                        for (int cv = 0; cv < 3; ++cv) {
                            const double val = Ke(3 * ku + cu, 3 * kv + cv);
                            if (val != 0.0)
                                trip.emplace_back(
                                    3 * local_node(mesh, ei, ej, ku) + cu,
                                    3 * local_node(mesh, ei, ej, kv) + cv, val);
                        }
        }
    }

    out.stiffness.resize(out.ndof, out.ndof);
    out.stiffness.setFromTriplets(trip.begin(), trip.end());
    return out;
}

double constant_term(const QuadForm3& q, const CrossSectionMesh& mesh,
                     const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    std::array<GaussPoint, 4> pts;
    double c = 0.0;
    for (int ei = 0; ei < mesh.n; ++ei) {
        for (int ej = 0; ej < mesh.n; ++ej) {
            element_gauss(mesh, ei, ej, pts);
            for (const GaussPoint& p : pts) {
                Eigen::Matrix3d Ma = Eigen::Matrix3d::Zero(), Mb = Eigen::Matrix3d::Zero();
                Ma.col(0) = forcing_column(a, p.x2, p.x3);
                Mb.col(0) = forcing_column(b, p.x2, p.x3);
                c += p.weight * eval_Q3_bilinear(q, Ma, Mb);
            }
        }
    }
    return c;
}

// The objective has a four-dimensional kernel: the three componentwise
// constants and the in-plane infinitesimal rotation (0, -x3, x2). The mean
// constraints of the gauge remove only the constants, so the solver pins
// four matching degrees of freedom for the factorization and afterwards
// projects the kernel out of the solution: zero mean per component and zero
// in-plane moment. The projected solution satisfies the full stationarity
// system, which is what the residual measures.
struct CellSolver {
    AssembledCell sys;
    CrossSectionMesh mesh;
    std::vector<int> free_of_full; // full dof -> reduced index or -1
    std::vector<int> full_of_free;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    Eigen::VectorXd rotation_mode; // nodal (0, -x3, x2), unit l2 norm

    CellSolver(const QuadForm3& q, const CrossSectionMesh& m)
        : sys(assemble(q, m)), mesh(m) {
        const int pin_node = mesh.node_index(0, 0);
        const int pin_rot = mesh.node_index(mesh.n, 0);
        std::vector<bool> pinned(sys.ndof, false);
        for (int c = 0; c < 3; ++c) pinned[3 * pin_node + c] = true;
        pinned[3 * pin_rot + 2] = true;

        free_of_full.assign(sys.ndof, -1);
        for (int d = 0; d < sys.ndof; ++d)
            if (!pinned[d]) {
                free_of_full[d] = static_cast<int>(full_of_free.size());
                full_of_free.push_back(d);
            }

        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(sys.stiffness.nonZeros());
        for (int col = 0; col < sys.stiffness.outerSize(); ++col)
            for (Eigen::SparseMatrix<double>::InnerIterator it(sys.stiffness, col); it;
                 ++it)
                if (free_of_full[it.row()] >= 0 && free_of_full[col] >= 0)
                    trip.emplace_back(free_of_full[it.row()], free_of_full[col],
                                      it.value());
        Eigen::SparseMatrix<double> reduced(static_cast<int>(full_of_free.size()),
                                            static_cast<int>(full_of_free.size()));
        reduced.setFromTriplets(trip.begin(), trip.end());
        ldlt.compute(reduced);
        if (ldlt.info() != Eigen::Success)
            throw NumericalError("E_CELL_ASSEMBLY",
                                 "cell problem: singular stiffness after gauge fixing");

        rotation_mode = Eigen::VectorXd::Zero(sys.ndof);
        for (int i = 0; i <= mesh.n; ++i)
            for (int j = 0; j <= mesh.n; ++j) {
                const int node = mesh.node_index(i, j);
                rotation_mode(3 * node + 1) = -mesh.coord(j);
                rotation_mode(3 * node + 2) = mesh.coord(i);
            }
        rotation_mode.normalize();
    }

    // Returns the gauged minimizer and the stationarity residual.
    Eigen::VectorXd solve(const Eigen::VectorXd& f, double& residual) const {
        Eigen::VectorXd rhs_free(full_of_free.size());
        for (size_t r = 0; r < full_of_free.size(); ++r)
            rhs_free(r) = -f(full_of_free[r]);
        const Eigen::VectorXd u_free = ldlt.solve(rhs_free);
        if (ldlt.info() != Eigen::Success)
            throw NumericalError("E_CELL_ASSEMBLY", "cell problem: direct solve failed");

        Eigen::VectorXd u = Eigen::VectorXd::Zero(sys.ndof);
        for (size_t r = 0; r < full_of_free.size(); ++r) u(full_of_free[r]) = u_free(r);

        // kernel gauge: remove the in-plane rotation, then the means
        u -= rotation_mode.dot(u) * rotation_mode;
        const double total_mass = sys.mass.sum();
        for (int c = 0; c < 3; ++c) {
            double mean = 0.0;
            for (int node = 0; node < mesh.node_count(); ++node)
                mean += sys.mass(node) * u(3 * node + c);
            mean /= total_mass;
            for (int node = 0; node < mesh.node_count(); ++node) u(3 * node + c) -= mean;
        }

        const double scale = std::max(1.0, f.lpNorm<Eigen::Infinity>());
        residual = (sys.stiffness * u + f).lpNorm<Eigen::Infinity>() / scale;
        if (residual > 1e-10)
            throw NumericalError("E_CELL_RESIDUAL",
                                 "cell problem: stationarity residual exceeds 1e-10");
        return u;
    }
};

} // namespace

CrossSectionMesh CrossSectionMesh::uniform(int n) {
    if (n < 1)
        throw InvalidInputError("E_BAD_MESH", "cross-section mesh needs n >= 1");
    CrossSectionMesh m;
    m.n = n;
    return m;
}

double CrossSectionMesh::total_area() const {
    const double he = element_size();
    double area = 0.0;
    for (int e = 0; e < element_count(); ++e) area += he * he;
    return area;
}

double cell_objective(const SkewParam& A, const QuadForm3& q,
                      const CrossSectionMesh& mesh, const Eigen::VectorXd& alpha) {
    if (alpha.size() != 3 * mesh.node_count())
        throw InvalidInputError("E_SIZE_MISMATCH", "cell_objective: nodal field size mismatch");
    std::array<GaussPoint, 4> pts;
    double total = 0.0;
    for (int ei = 0; ei < mesh.n; ++ei) {
        for (int ej = 0; ej < mesh.n; ++ej) {
            element_gauss(mesh, ei, ej, pts);
            for (const GaussPoint& p : pts) {
                Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
                M.col(0) = forcing_column(A.a, p.x2, p.x3);
                for (int k = 0; k < 4; ++k) {
                    const int node = local_node(mesh, ei, ej, k);
                    const Eigen::Vector3d an = alpha.segment<3>(3 * node);
                    M.col(1) += p.dN2[k] * an;
                    M.col(2) += p.dN3[k] * an;
                }
                total += p.weight * eval_Q3(q, M);
            }
        }
    }
    return total;
}

CellSolution solve_cell(const SkewParam& A, const QuadForm3& q,
                        const CrossSectionMesh& mesh) {
    CellSolver solver(q, mesh);
    const Eigen::VectorXd f = solver.sys.load(mesh, q, A.a);
    CellSolution sol;
    sol.mesh = mesh;
    sol.alpha = solver.solve(f, sol.residual);
    sol.value = constant_term(q, mesh, A.a, A.a) + f.dot(sol.alpha);
    return sol;
}

Eigen::Vector3d CellBasis::corrector(const Eigen::Vector3d& a, double x2, double x3) const {
    const double he = mesh.element_size();
    const double s2 = (x2 + 0.5) / he, s3 = (x3 + 0.5) / he;
    const int ei = std::min(std::max(static_cast<int>(std::floor(s2)), 0), mesh.n - 1);
    const int ej = std::min(std::max(static_cast<int>(std::floor(s3)), 0), mesh.n - 1);
    const double s = s2 - ei, t = s3 - ej;
    const double N[4] = {(1 - s) * (1 - t), s * (1 - t), (1 - s) * t, s * t};
    Eigen::Vector3d out = Eigen::Vector3d::Zero();
    static const int di[4] = {0, 1, 0, 1};
    static const int dj[4] = {0, 0, 1, 1};
    for (int k = 0; k < 4; ++k) {
        const int node = mesh.node_index(ei + di[k], ej + dj[k]);
        for (int c = 0; c < 3; ++c)
            out(c) += N[k] * (a(0) * alpha[0](3 * node + c) + a(1) * alpha[1](3 * node + c) +
                              a(2) * alpha[2](3 * node + c));
    }
    return out;
}

CellBasis solve_cell_basis(const QuadForm3& q, const CrossSectionMesh& mesh) {
    CellSolver solver(q, mesh);
    CellBasis basis;
    basis.mesh = mesh;

    std::array<Eigen::VectorXd, 3> loads;
    for (int k = 0; k < 3; ++k) {
        loads[k] = solver.sys.load(mesh, q, Eigen::Vector3d::Unit(k));
        double residual = 0.0;
        basis.alpha[k] = solver.solve(loads[k], residual);
    }

    Eigen::Matrix3d B;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            B(i, j) = constant_term(q, mesh, Eigen::Vector3d::Unit(i), Eigen::Vector3d::Unit(j)) +
                      loads[i].dot(basis.alpha[j]);
    basis.q2.B = 0.5 * (B + B.transpose());

    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(basis.q2.B);
    if (eig.eigenvalues().minCoeff() <= 0.0)
        throw NumericalError("E_Q2_NOT_SPD",
                             "effective stiffness matrix is not positive definite");
    return basis;
}

Q2Matrix assemble_q2_matrix(const QuadForm3& q, const CrossSectionMesh& mesh) {
    return solve_cell_basis(q, mesh).q2;
}

} // namespace rodvoids
