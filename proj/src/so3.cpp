#include "rodvoids/so3.hpp"

#include <cmath>

namespace rodvoids {

Eigen::Matrix3d hat(const Eigen::Vector3d& a) {
    Eigen::Matrix3d A;
    A <<     0.0, -a.z(),  a.y(),
          a.z(),     0.0, -a.x(),
         -a.y(),  a.x(),     0.0;
    return A;
}

Eigen::Vector3d unhat(const Eigen::Matrix3d& A) {
    return {A(2, 1), A(0, 2), A(1, 0)};
}

Eigen::Matrix3d exp_so3(const Eigen::Vector3d& w) {
    const double theta2 = w.squaredNorm();
    const double theta = std::sqrt(theta2);
    const Eigen::Matrix3d W = hat(w);
    double c1, c2; // sin(t)/t, (1-cos(t))/t^2
    if (theta < 1e-4) {
        c1 = 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0;
        c2 = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
    } else {
        c1 = std::sin(theta) / theta;
        c2 = (1.0 - std::cos(theta)) / theta2;
    }
    return Eigen::Matrix3d::Identity() + c1 * W + c2 * W * W;
}

Eigen::Vector3d log_so3(const Eigen::Matrix3d& R) {
    const double tr = R.trace();
    const double cos_theta = std::clamp((tr - 1.0) / 2.0, -1.0, 1.0);
    const double theta = std::acos(cos_theta);
    const Eigen::Vector3d w = unhat(R - R.transpose()); // = 2 sin(theta) * axis

    if (theta < 1e-6) {
        // log R ~ skew part with a second-order correction
        return 0.5 * (1.0 + theta * theta / 12.0) * w;
    }
    if (theta > M_PI - 1e-4) {
        // Near angle pi the skew part degenerates; recover the axis from
        // the symmetric part: R + R^T = 2 cos(t) Id + 2(1-cos(t)) n n^T.
        const Eigen::Matrix3d S =
            (R + R.transpose()) / 2.0 - cos_theta * Eigen::Matrix3d::Identity();
        // S = (1-cos t) n n^T; take the largest diagonal for stability.
        int k;
        S.diagonal().maxCoeff(&k);
        Eigen::Vector3d n = S.col(k) / std::sqrt(std::max(S(k, k), 1e-300));
        n.normalize();
        // Fix the sign using the skew part (vanishes exactly at pi, where
        // the sign is immaterial).
        if (n.dot(w) < 0.0) n = -n;
        return theta * n;
    }
    return (theta / (2.0 * std::sin(theta))) * w;
}

Eigen::Matrix3d right_jacobian_inv_so3(const Eigen::Vector3d& v) {
    const double theta2 = v.squaredNorm();
    const double theta = std::sqrt(theta2);
    const Eigen::Matrix3d V = hat(v);
    double c; // 1/theta^2 - (1+cos)/(2 theta sin)
    if (theta < 1e-4) {
        c = 1.0 / 12.0 + theta2 / 720.0;
    } else {
        c = 1.0 / theta2 - (1.0 + std::cos(theta)) / (2.0 * theta * std::sin(theta));
    }
    return Eigen::Matrix3d::Identity() + 0.5 * V + c * V * V;
}

Eigen::Matrix3d left_jacobian_inv_so3(const Eigen::Vector3d& v) {
    return right_jacobian_inv_so3(v).transpose();
}

double uniform01(std::uint64_t& state) {
    // splitmix64 step; gives reproducible streams across platforms
    state += 0x9E3779B97f4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * (1.0 / 9007199254740992.0);
}

Eigen::Matrix3d random_rotation(std::uint64_t& state) {
    // Shoemake's method: uniform quaternion from three uniforms.
    const double u1 = uniform01(state);
    const double u2 = uniform01(state);
    const double u3 = uniform01(state);
    const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
    const Eigen::Quaterniond q(a * std::sin(2.0 * M_PI * u2),
                               a * std::cos(2.0 * M_PI * u2),
                               b * std::sin(2.0 * M_PI * u3),
                               b * std::cos(2.0 * M_PI * u3));
    return q.normalized().toRotationMatrix();
}

} // namespace rodvoids
