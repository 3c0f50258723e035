#ifndef RODVOIDS_TRIMESH_HPP
#define RODVOIDS_TRIMESH_HPP

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace rodvoids {

// Closed triangle mesh used to validate the analytic surface-energy path on
// spheres: mesh area against 4 pi r^2 and the discrete squared second
// fundamental form against 8 pi.
struct TriMesh {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<int, 3>> faces;

    double area() const;

    // Discrete int |A|^2 = sum_v (4 H_v^2 - 2 K_v) A_v with cotangent mean
    // curvature, angle-defect Gauss curvature, and mixed Voronoi areas.
    double second_fundamental_form_sq_integral() const;

    static TriMesh icosphere(const Eigen::Vector3d& center, double r, int subdivisions);
};

} // namespace rodvoids

#endif
