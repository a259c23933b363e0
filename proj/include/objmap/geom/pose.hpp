#pragma once

#include "objmap/core/types.hpp"

namespace objmap::geom {

/// Rigid transform: x -> rotation * x + translation.
struct RigidPose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidPose identity() { return {}; }

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

  RigidPose inverse() const {
    RigidPose inv;
    inv.rotation = rotation.transpose();
    inv.translation = -(inv.rotation * translation);
    return inv;
  }

  /// Composition: (a * b)(x) == a(b(x)).
  friend RigidPose operator*(const RigidPose& a, const RigidPose& b) {
    RigidPose out;
    out.rotation = a.rotation * b.rotation;
    out.translation = a.rotation * b.translation + a.translation;
    return out;
  }

  bool is_proper(double tol = 1e-9) const {
    const bool ortho =
        (rotation * rotation.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol * 10;
    return ortho && std::abs(rotation.determinant() - 1.0) <= tol * 10;
  }

  /// Rotation angle of this pose, radians in [0, pi].
  double rotation_angle() const {
    double c = (rotation.trace() - 1.0) * 0.5;
    return std::acos(std::clamp(c, -1.0, 1.0));
  }

  /// Angle between the two rotations, radians.
  double rotation_distance(const RigidPose& other) const {
    RigidPose d;
    d.rotation = rotation.transpose() * other.rotation;
    return d.rotation_angle();
  }
};

}  // namespace objmap::geom
