#ifndef RODVOIDS_SO3_HPP
#define RODVOIDS_SO3_HPP

#include <Eigen/Dense>
#include <cstdint>

namespace rodvoids {

// Hat map: hat(a) x = a x (cross product), so
//   hat(a) = [  0  -a3   a2 ]
//            [ a3    0  -a1 ]
//            [-a2   a1    0 ]
Eigen::Matrix3d hat(const Eigen::Vector3d& a);

// Inverse of the hat map on skew-symmetric matrices.
Eigen::Vector3d unhat(const Eigen::Matrix3d& A);

// Rodrigues formula, exp(hat(w)).
Eigen::Matrix3d exp_so3(const Eigen::Vector3d& w);

// Rotation vector of R (axis * angle, angle in [0, pi]).
// Stable near angle 0 and angle pi.
Eigen::Vector3d log_so3(const Eigen::Matrix3d& R);

// Inverse of the right Jacobian of exp at rotation vector v:
//   d/dt log(exp(hat(v)) exp(t hat(xi)))|_{t=0} = jr_inv(v) xi .
Eigen::Matrix3d right_jacobian_inv_so3(const Eigen::Vector3d& v);

// Inverse of the left Jacobian: d/dt log(exp(t hat(xi)) exp(hat(v)))|_{t=0}
// = jl_inv(v) xi. Satisfies jl_inv(v) = jr_inv(v)^T.
Eigen::Matrix3d left_jacobian_inv_so3(const Eigen::Vector3d& v);

// Deterministic uniformly distributed rotation (for sampled tests and
// probes); based on a quaternion drawn from a seeded engine.
Eigen::Matrix3d random_rotation(std::uint64_t& state);

// xorshift-style generator used wherever we need reproducible samples.
double uniform01(std::uint64_t& state);

} // namespace rodvoids

#endif
