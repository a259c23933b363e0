#include "objmap/geom/cloud.hpp"

#include <Eigen/Eigenvalues>

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "objmap/core/rng.hpp"

namespace objmap::geom {

Vec3 PointCloud3::centroid() const {
  Vec3 c = Vec3::Zero();
  for (const Vec3& p : points) c += p;
  return points.empty() ? c : Vec3(c / static_cast<double>(points.size()));
}

void PointCloud3::aabb(Vec3& lo, Vec3& hi) const {
  lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  hi = -lo;
  for (const Vec3& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
}

double PointCloud3::largest_dimension() const {
  if (points.size() < 2) return 0.0;
  if (points.size() < 8) {
    double best = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t j = i + 1; j < points.size(); ++j)
        best = std::max(best, (points[i] - points[j]).norm());
    return best;
  }
  const Vec3 c = centroid();
  Mat3 cov = Mat3::Zero();
  for (const Vec3& p : points) {
    Vec3 d = p - c;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Mat3> es(cov);
  double best = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Vec3 axis = es.eigenvectors().col(k);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const Vec3& p : points) {
      double t = axis.dot(p - c);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    best = std::max(best, hi - lo);
  }
  return best;
}

PointCloud3 PointCloud3::transformed(const RigidPose& pose) const {
  PointCloud3 out;
  out.points.reserve(points.size());
  for (const Vec3& p : points) out.points.push_back(pose.apply(p));
  return out;
}

PointCloud3 voxel_downsample(const PointCloud3& cloud, double cell) {
  PointCloud3 out;
  if (cell <= 0.0) return cloud;
  std::unordered_map<std::uint64_t, bool> seen;
  seen.reserve(cloud.points.size());
  for (const Vec3& p : cloud.points) {
    const long ix = static_cast<long>(std::floor(p.x() / cell));
    const long iy = static_cast<long>(std::floor(p.y() / cell));
    const long iz = static_cast<long>(std::floor(p.z() / cell));
    std::uint64_t k = hash_mix(hash_mix(static_cast<std::uint64_t>(ix),
                                        static_cast<std::uint64_t>(iy)),
                               static_cast<std::uint64_t>(iz));
    auto [it, inserted] = seen.emplace(k, true);
    if (inserted) out.points.push_back(p);
  }
  return out;
}

void save_ply(const PointCloud3& cloud, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path);
  f << "ply\nformat ascii 1.0\n";
  f << "element vertex " << cloud.points.size() << "\n";
  f << "property double x\nproperty double y\nproperty double z\n";
  f << "end_header\n";
  char buf[128];
  for (const Vec3& p : cloud.points) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    f << buf;
  }
  if (!f) throw IoError("write failed: " + path);
}

PointCloud3 load_ply(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read " + path);
  std::string line;
  std::size_t n = 0;
  bool header_done = false;
  while (std::getline(f, line)) {
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    if (tok == "element") {
      std::string what;
      ss >> what >> n;
      if (what != "vertex") throw IoError("unsupported PLY element in " + path);
    } else if (tok == "end_header") {
      header_done = true;
      break;
    }
  }
  if (!header_done) throw IoError("missing PLY header in " + path);
  PointCloud3 cloud;
  cloud.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 p;
    if (!(f >> p.x() >> p.y() >> p.z())) throw IoError("truncated PLY " + path);
    cloud.points.push_back(p);
  }
  return cloud;
}

}  // namespace objmap::geom
