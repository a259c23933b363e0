#include "objmap/geom/obb.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <limits>

namespace objmap::geom {

namespace {
constexpr double kMinExtent = 1e-6;  // meters; clamp for planar point sets

void sign_fix(Vec3& axis) {
  int idx = 0;
  axis.cwiseAbs().maxCoeff(&idx);
  if (axis[idx] < 0.0) axis = -axis;
}
}  // namespace

OrientedBox fit_obb(const PointCloud3& cloud) {
  if (cloud.count() < 4)
    throw DegenerateCloudError("fit_obb requires at least 4 points");

  const Vec3 c0 = cloud.centroid();
  Mat3 cov = Mat3::Zero();
  for (const Vec3& p : cloud.points) {
    Vec3 d = p - c0;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(cloud.count());
  Eigen::SelfAdjointEigenSolver<Mat3> es(cov);

  struct AxisInfo {
    Vec3 axis;
    double lo, hi;
    double extent() const { return hi - lo; }
  };
  std::array<AxisInfo, 3> ax;
  for (int k = 0; k < 3; ++k) {
    ax[k].axis = es.eigenvectors().col(k);
    ax[k].lo = std::numeric_limits<double>::infinity();
    ax[k].hi = -ax[k].lo;
    for (const Vec3& p : cloud.points) {
      double t = ax[k].axis.dot(p - c0);
      ax[k].lo = std::min(ax[k].lo, t);
      ax[k].hi = std::max(ax[k].hi, t);
    }
  }

  const double scale = std::max({ax[0].extent(), ax[1].extent(), ax[2].extent(), 1e-12});
  const double tie = 1e-9 * std::max(1.0, scale);
  std::sort(ax.begin(), ax.end(), [&](const AxisInfo& a, const AxisInfo& b) {
    if (std::abs(a.extent() - b.extent()) > tie) return a.extent() > b.extent();
    const double az = std::abs(a.axis.z()), bz = std::abs(b.axis.z());
    if (std::abs(az - bz) > 1e-12) return az > bz;
    return std::abs(a.axis.x()) > std::abs(b.axis.x());
  });

  // rank < 2: all but the largest extent collapse
  if (ax[1].extent() < 1e-9 * std::max(1.0, ax[0].extent()))
    throw DegenerateCloudError("fit_obb: point set has rank < 2");

  OrientedBox box;
  Vec3 a0 = ax[0].axis, a1 = ax[1].axis;
  sign_fix(a0);
  sign_fix(a1);
  const Vec3 a2 = a0.cross(a1);
  box.axes.col(0) = a0;
  box.axes.col(1) = a1;
  box.axes.col(2) = a2;

  Vec3 he, mid;
  for (int k = 0; k < 3; ++k) {
    const Vec3 axis = box.axes.col(k);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const Vec3& p : cloud.points) {
      double t = axis.dot(p - c0);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    mid[k] = 0.5 * (lo + hi);
    he[k] = std::max(0.5 * (hi - lo), kMinExtent);
  }
  box.center = c0 + box.axes * mid;
  box.half_extents = he;
  return box;
}

Vec3 world_to_nocs(const Vec3& point, const OrientedBox& box) {
  return box.to_local(point).cwiseQuotient(box.half_extents);
}

Vec3 nocs_to_world(const Vec3& cube_point, const OrientedBox& box) {
  return box.from_local(cube_point.cwiseProduct(box.half_extents));
}

bool intersect_ray_box(const Vec3& origin, const Vec3& dir, const OrientedBox& box,
                       double& t0, double& t1) {
  const Vec3 o = box.to_local(origin);
  const Vec3 d = box.axes.transpose() * dir;
  t0 = -std::numeric_limits<double>::infinity();
  t1 = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    if (std::abs(d[k]) < 1e-15) {
      if (std::abs(o[k]) > box.half_extents[k]) return false;
      continue;
    }
    double ta = (-box.half_extents[k] - o[k]) / d[k];
    double tb = (box.half_extents[k] - o[k]) / d[k];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

}  // namespace objmap::geom
