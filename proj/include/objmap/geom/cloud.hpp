#pragma once

#include <string>
#include <vector>

#include "objmap/geom/pose.hpp"

namespace objmap::geom {

/// Sampled 3D surface points of one observed object, world frame, meters.
struct PointCloud3 {
  std::vector<Vec3> points;

  std::size_t count() const { return points.size(); }
  bool empty() const { return points.empty(); }

  Vec3 centroid() const;
  void aabb(Vec3& lo, Vec3& hi) const;

  /// Largest extent of the cloud along its principal axes. Rotation
  /// invariant; falls back to the maximum pairwise distance for tiny clouds.
  double largest_dimension() const;

  PointCloud3 transformed(const RigidPose& pose) const;
};

/// Keeps the first point falling into each `cell`-sized voxel, in input
/// order, so downsampled points stay exactly on the sampled surface.
PointCloud3 voxel_downsample(const PointCloud3& cloud, double cell);

/// ASCII PLY with float64 vertex properties x y z.
void save_ply(const PointCloud3& cloud, const std::string& path);
PointCloud3 load_ply(const std::string& path);

}  // namespace objmap::geom
