#pragma once

#include "objmap/geom/cloud.hpp"
#include "objmap/geom/pose.hpp"

namespace objmap::geom {

/// Oriented bounding box. Columns of `axes` are the box axes (proper
/// orthonormal); `half_extents` are strictly positive.
struct OrientedBox {
  Vec3 center = Vec3::Zero();
  Mat3 axes = Mat3::Identity();
  Vec3 half_extents = Vec3::Ones();

  Vec3 to_local(const Vec3& p) const { return axes.transpose() * (p - center); }
  Vec3 from_local(const Vec3& q) const { return center + axes * q; }

  bool contains(const Vec3& p, double eps = 1e-9) const {
    Vec3 q = to_local(p).cwiseAbs() - half_extents;
    return q.maxCoeff() <= eps;
  }

  double volume() const {
    return 8.0 * half_extents.x() * half_extents.y() * half_extents.z();
  }

  bool valid(double tol = 1e-9) const {
    RigidPose r{axes, Vec3::Zero()};
    return r.is_proper(tol) && half_extents.minCoeff() > 0.0;
  }

  OrientedBox inflated(double factor) const {
    OrientedBox b = *this;
    b.half_extents *= factor;
    return b;
  }

  OrientedBox transformed(const RigidPose& pose) const {
    OrientedBox b;
    b.center = pose.apply(center);
    b.axes = pose.rotation * axes;
    b.half_extents = half_extents;
    return b;
  }
};

/// PCA box fit. Axes are the principal directions of the centered points,
/// ordered by descending extent; extent ties prefer the axis closest to
/// world +z, then +x. Near-zero extents are clamped to 1e-6 m; rank < 2
/// point sets raise DegenerateCloudError.
OrientedBox fit_obb(const PointCloud3& cloud);

/// Maps a world point into the box's [-1,1]^3 normalized cube.
Vec3 world_to_nocs(const Vec3& point, const OrientedBox& box);
Vec3 nocs_to_world(const Vec3& cube_point, const OrientedBox& box);

/// Ray/box intersection in a given direction parameterization:
/// p(t) = origin + t * dir. Returns false on miss, else [t0, t1] clipped
/// so that t1 >= t0.
bool intersect_ray_box(const Vec3& origin, const Vec3& dir, const OrientedBox& box,
                       double& t0, double& t1);

}  // namespace objmap::geom
