#include "objmap/geom/chamfer.hpp"

namespace objmap::geom {

double unidirectional_chamfer(const PointCloud3& P, const PointCloud3& Q) {
  if (P.empty() || Q.empty())
    throw DegenerateCloudError("unidirectional_chamfer: empty cloud");
  if (std::max(P.count(), Q.count()) <= kBruteForceLimit) {
    double sum = 0.0;
    for (const Vec3& p : P.points) sum += nearest_brute(p, Q.points).distance;
    return sum / static_cast<double>(P.count());
  }
  return unidirectional_chamfer(P, PointGrid(Q.points));
}

double unidirectional_chamfer(const PointCloud3& P, const PointGrid& Q) {
  if (P.empty() || Q.size() == 0)
    throw DegenerateCloudError("unidirectional_chamfer: empty cloud");
  double sum = 0.0;
  for (const Vec3& p : P.points) sum += Q.nearest(p).distance;
  return sum / static_cast<double>(P.count());
}

}  // namespace objmap::geom
