#include "rodvoids/trimesh.hpp"

#include <cmath>
#include <map>

namespace rodvoids {

double TriMesh::area() const {
    double total = 0.0;
    for (const auto& f : faces) {
        const Eigen::Vector3d e1 = vertices[f[1]] - vertices[f[0]];
        const Eigen::Vector3d e2 = vertices[f[2]] - vertices[f[0]];
        total += 0.5 * e1.cross(e2).norm();
    }
    return total;
}

double TriMesh::second_fundamental_form_sq_integral() const {
    const int nv = static_cast<int>(vertices.size());
    std::vector<Eigen::Vector3d> laplace(nv, Eigen::Vector3d::Zero());
    std::vector<double> mixed_area(nv, 0.0);
    std::vector<double> angle_sum(nv, 0.0);

    for (const auto& f : faces) {
        for (int c = 0; c < 3; ++c) {
            const int vi = f[c], vj = f[(c + 1) % 3], vk = f[(c + 2) % 3];
            const Eigen::Vector3d u = vertices[vj] - vertices[vi];
            const Eigen::Vector3d v = vertices[vk] - vertices[vi];
            const double angle = std::atan2(u.cross(v).norm(), u.dot(v));
            angle_sum[vi] += angle;

            // cotangent opposite the edge (vj, vk) feeds that edge's weight
            const Eigen::Vector3d a = vertices[vj] - vertices[vi];
            const Eigen::Vector3d b = vertices[vk] - vertices[vi];
            const double cot_i = a.dot(b) / a.cross(b).norm();
            laplace[vj] += 0.5 * cot_i * (vertices[vk] - vertices[vj]);
            laplace[vk] += 0.5 * cot_i * (vertices[vj] - vertices[vk]);

            // mixed Voronoi area (Meyer et al.); icosphere triangles are
            // non-obtuse, with the barycentric fallback kept for safety
            const Eigen::Vector3d ij = vertices[vj] - vertices[vi];
            const Eigen::Vector3d ik = vertices[vk] - vertices[vi];
            const Eigen::Vector3d jk = vertices[vk] - vertices[vj];
            const double tri_area = 0.5 * ij.cross(ik).norm();
            const bool obtuse = ij.dot(ik) < 0.0 || (-ij).dot(jk) < 0.0 ||
                                (-ik).dot(-jk) < 0.0;
            if (obtuse) {
                mixed_area[vi] += tri_area / 3.0;
            } else {
                const double cot_j = (-ij).dot(jk) / (-ij).cross(jk).norm();
                const double cot_k = (-ik).dot(-jk) / (-ik).cross(-jk).norm();
                mixed_area[vi] +=
                    (ik.squaredNorm() * cot_j + ij.squaredNorm() * cot_k) / 8.0;
            }
        }
    }

    double total = 0.0;
    for (int v = 0; v < nv; ++v) {
        const double av = mixed_area[v];
        if (av <= 0.0) continue;
        const double mean_curv = laplace[v].norm() / (2.0 * av); // |H|
        const double defect = 2.0 * M_PI - angle_sum[v];         // K_v * A_v
        total += 4.0 * mean_curv * mean_curv * av - 2.0 * defect;
    }
    return total;
}

TriMesh TriMesh::icosphere(const Eigen::Vector3d& center, double r, int subdivisions) {
    TriMesh mesh;
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    const double s = 1.0 / std::sqrt(1.0 + phi * phi);
    auto add = [&](double a, double b, double c) {
        mesh.vertices.emplace_back(a * s, b * s, c * s);
    };
    add(-1, phi, 0); add(1, phi, 0); add(-1, -phi, 0); add(1, -phi, 0);
    add(0, -1, phi); add(0, 1, phi); add(0, -1, -phi); add(0, 1, -phi);
    add(phi, 0, -1); add(phi, 0, 1); add(-phi, 0, -1); add(-phi, 0, 1);
    mesh.faces = {{0, 11, 5},  {0, 5, 1},   {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                  {1, 5, 9},   {5, 11, 4},  {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                  {3, 9, 4},   {3, 4, 2},   {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                  {4, 9, 5},   {2, 4, 11},  {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            const int idx = static_cast<int>(mesh.vertices.size());
            mesh.vertices.push_back((mesh.vertices[a] + mesh.vertices[b]).normalized());
            midpoint[key] = idx;
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(mesh.faces.size() * 4);
        for (const auto& f : mesh.faces) {
            const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        mesh.faces = std::move(next);
    }

    for (auto& v : mesh.vertices) v = center + r * v;
    return mesh;
}

} // namespace rodvoids
