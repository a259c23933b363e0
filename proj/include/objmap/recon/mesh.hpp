#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "objmap/geom/cloud.hpp"
#include "objmap/geom/obb.hpp"

namespace objmap::recon {

using geom::OrientedBox;
using geom::PointCloud3;
using geom::RigidPose;

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;
  int provenance_id = 0;

  bool empty() const { return triangles.empty(); }
  std::size_t triangle_count() const { return triangles.size(); }
  double area() const;
  void append(const TriangleMesh& other);
  TriangleMesh transformed(const RigidPose& pose) const;
};

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// Keeps triangles whose centroid lies inside the box; vertices compacted.
TriangleMesh crop_mesh(const TriangleMesh& mesh, const OrientedBox& box);

/// n points uniformly by surface area. Deterministic for a given seed.
PointCloud3 sample_mesh_points(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed);

/// Exact point-to-surface distance with a uniform-grid broad phase.
class MeshDistanceIndex {
 public:
  explicit MeshDistanceIndex(const TriangleMesh& mesh);
  double distance(const Vec3& p) const;
  /// Linear scan over all triangles; oracle for the grid path.
  double distance_brute(const Vec3& p) const;

 private:
  std::uint64_t key(long ix, long iy, long iz) const;
  void cell_of(const Vec3& p, long& ix, long& iy, long& iz) const;
  double tri_distance(std::uint32_t t, const Vec3& p) const;

  std::vector<std::array<Vec3, 3>> tris_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
  Vec3 origin_ = Vec3::Zero(), extent_ = Vec3::Zero();
  double cell_ = 1.0;
};

void save_obj(const TriangleMesh& mesh, const std::string& path);
TriangleMesh load_obj(const std::string& path);

}  // namespace objmap::recon
