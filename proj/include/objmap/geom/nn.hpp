#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "objmap/geom/cloud.hpp"

namespace objmap::geom {

struct NearestHit {
  std::size_t index = 0;
  double distance = 0.0;
};

/// Exact linear-scan nearest neighbor.
NearestHit nearest_brute(const Vec3& query, const std::vector<Vec3>& points);

/// Exact nearest-neighbor index over a uniform hash grid. Agrees with
/// nearest_brute on every query; the broad phase only prunes cells that
/// provably cannot contain a closer point.
class PointGrid {
 public:
  PointGrid() = default;
  explicit PointGrid(const std::vector<Vec3>& points, double cell = 0.0);

  NearestHit nearest(const Vec3& query) const;
  const std::vector<Vec3>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

 private:
  using CellKey = std::uint64_t;
  CellKey key(long ix, long iy, long iz) const;
  void cell_of(const Vec3& p, long& ix, long& iy, long& iz) const;

  std::vector<Vec3> points_;
  std::unordered_map<CellKey, std::vector<std::uint32_t>> cells_;
  double cell_ = 1.0;
  Vec3 origin_ = Vec3::Zero();
  Vec3 extent_ = Vec3::Zero();
};

}  // namespace objmap::geom
