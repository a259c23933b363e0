#include "objmap/geom/nn.hpp"

#include <cmath>
#include <limits>

#include "objmap/core/rng.hpp"

namespace objmap::geom {

NearestHit nearest_brute(const Vec3& query, const std::vector<Vec3>& points) {
  NearestHit best;
  double best_sq = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d = (points[i] - query).squaredNorm();
    if (d < best_sq) {
      best_sq = d;
      best.index = i;
    }
  }
  best.distance = std::sqrt(best_sq);
  return best;
}

PointGrid::PointGrid(const std::vector<Vec3>& points, double cell) : points_(points) {
  if (points_.empty()) return;
  Vec3 lo = points_[0], hi = points_[0];
  for (const Vec3& p : points_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  origin_ = lo;
  extent_ = hi - lo;
  if (cell <= 0.0) {
    // aim for a handful of points per cell
    const double diag = extent_.norm();
    const double per_axis = std::cbrt(static_cast<double>(points_.size()));
    cell = diag > 0.0 ? std::max(diag / std::max(per_axis, 1.0), 1e-9) : 1.0;
  }
  cell_ = cell;
  cells_.reserve(points_.size());
  for (std::uint32_t i = 0; i < points_.size(); ++i) {
    long ix, iy, iz;
    cell_of(points_[i], ix, iy, iz);
    cells_[key(ix, iy, iz)].push_back(i);
  }
}

PointGrid::CellKey PointGrid::key(long ix, long iy, long iz) const {
  return hash_mix(hash_mix(static_cast<std::uint64_t>(ix), static_cast<std::uint64_t>(iy)),
                  static_cast<std::uint64_t>(iz));
}

void PointGrid::cell_of(const Vec3& p, long& ix, long& iy, long& iz) const {
  ix = static_cast<long>(std::floor((p.x() - origin_.x()) / cell_));
  iy = static_cast<long>(std::floor((p.y() - origin_.y()) / cell_));
  iz = static_cast<long>(std::floor((p.z() - origin_.z()) / cell_));
}

NearestHit PointGrid::nearest(const Vec3& query) const {
  NearestHit best;
  double best_sq = std::numeric_limits<double>::infinity();
  long qx, qy, qz;
  cell_of(query, qx, qy, qz);

  // Farthest the data can possibly be, in shells.
  double far_sq = 0.0;
  for (int cx = 0; cx < 2; ++cx)
    for (int cy = 0; cy < 2; ++cy)
      for (int cz = 0; cz < 2; ++cz) {
        Vec3 corner = origin_ + Vec3(cx * extent_.x(), cy * extent_.y(), cz * extent_.z());
        far_sq = std::max(far_sq, (corner - query).squaredNorm());
      }
  const long r_max = static_cast<long>(std::ceil(std::sqrt(far_sq) / cell_)) + 2;

  // Expanding Chebyshev shells. Every point in a shell-r cell lies at least
  // (r-1)*cell from the query, so shells beyond that bound cannot improve.
  for (long r = 0; r <= r_max; ++r) {
    if (best_sq < std::numeric_limits<double>::infinity()) {
      const double bound = (static_cast<double>(r) - 1.0) * cell_;
      if (bound > 0.0 && bound * bound > best_sq) break;
    }
    for (long dx = -r; dx <= r; ++dx) {
      for (long dy = -r; dy <= r; ++dy) {
        const bool face = (std::labs(dx) == r || std::labs(dy) == r);
        const long step = face ? 1 : (2 * r > 0 ? 2 * r : 1);
        for (long dz = -r; dz <= r; dz += step) {
          auto it = cells_.find(key(qx + dx, qy + dy, qz + dz));
          if (it == cells_.end()) continue;
          for (std::uint32_t idx : it->second) {
            const double d = (points_[idx] - query).squaredNorm();
            if (d < best_sq) {
              best_sq = d;
              best.index = idx;
            }
          }
        }
      }
    }
  }
  best.distance = std::sqrt(best_sq);
  return best;
}

}  // namespace objmap::geom
