// Rigid-body pose (position + unit quaternion) with the composition algebra
// needed for relative end-effector tracking.

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace choice::teleop {

struct Quat {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

  Quat normalized() const {
    double n = norm();
    if (n == 0.0) throw std::invalid_argument("cannot normalize zero quaternion");
    return {w / n, x / n, y / n, z / n};
  }

  Quat conjugate() const { return {w, -x, -y, -z}; }

  Quat operator*(const Quat& q) const {
    return {w * q.w - x * q.x - y * q.y - z * q.z,
            w * q.x + x * q.w + y * q.z - z * q.y,
            w * q.y - x * q.z + y * q.w + z * q.x,
            w * q.z + x * q.y - y * q.x + z * q.w};
  }

  std::array<double, 3> rotate(const std::array<double, 3>& v) const {
    // q v q* with v as a pure quaternion
    Quat p{0.0, v[0], v[1], v[2]};
    Quat r = *this * p * conjugate();
    return {r.x, r.y, r.z};
  }

  static Quat from_axis_angle(const std::array<double, 3>& axis, double angle) {
    double n = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    if (n == 0.0) throw std::invalid_argument("axis must be nonzero");
    double h = angle / 2.0;
    double s = std::sin(h) / n;
    return {std::cos(h), axis[0] * s, axis[1] * s, axis[2] * s};
  }
};

struct Pose {
  std::array<double, 3> position{0.0, 0.0, 0.0};
  Quat orientation;

  // Unit-norm invariant, tolerance 1e-9.
  void validate() const {
    if (std::abs(orientation.norm() - 1.0) > 1e-9) {
      throw std::invalid_argument("pose orientation is not a unit quaternion");
    }
  }

  // this ∘ other: apply `other` in this pose's frame.
  Pose compose(const Pose& other) const {
    std::array<double, 3> p = orientation.rotate(other.position);
    return Pose{{position[0] + p[0], position[1] + p[1], position[2] + p[2]},
                orientation * other.orientation};
  }

  Pose inverse() const {
    Quat qi = orientation.conjugate();
    std::array<double, 3> p = qi.rotate(position);
    return Pose{{-p[0], -p[1], -p[2]}, qi};
  }
};

}  // namespace choice::teleop
