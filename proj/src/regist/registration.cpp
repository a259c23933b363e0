#include "objmap/regist/registration.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <numeric>

namespace objmap::regist {

std::vector<RigidPose> initial_poses(const OrientedBox& source_box,
                                     const OrientedBox& target_box) {
  // signed permutation matrices with det +1 (rotational octahedral group)
  std::vector<Mat3> group;
  int perm[3] = {0, 1, 2};
  std::sort(perm, perm + 3);
  do {
    for (int sx : {-1, 1})
      for (int sy : {-1, 1})
        for (int sz : {-1, 1}) {
          Mat3 p = Mat3::Zero();
          p(0, perm[0]) = sx;
          p(1, perm[1]) = sy;
          p(2, perm[2]) = sz;
          if (p.determinant() > 0.5) group.push_back(p);
        }
  } while (std::next_permutation(perm, perm + 3));

  std::vector<RigidPose> poses;
  poses.reserve(group.size());
  for (const Mat3& p : group) {
    RigidPose pose;
    pose.rotation = target_box.axes * p * source_box.axes.transpose();
    pose.translation = target_box.center - pose.rotation * source_box.center;
    poses.push_back(pose);
  }
  return poses;
}

namespace {

RigidPose kabsch(const std::vector<Vec3>& src, const std::vector<Vec3>& dst) {
  Vec3 cs = Vec3::Zero(), cd = Vec3::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    cs += src[i];
    cd += dst[i];
  }
  cs /= static_cast<double>(src.size());
  cd /= static_cast<double>(src.size());
  Mat3 h = Mat3::Zero();
  for (std::size_t i = 0; i < src.size(); ++i)
    h += (src[i] - cs) * (dst[i] - cd).transpose();
  Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() > 0 ? 1.0 : -1.0;
  RigidPose pose;
  pose.rotation = svd.matrixV() * d * svd.matrixU().transpose();
  pose.translation = cd - pose.rotation * cs;
  return pose;
}

}  // namespace

IcpResult refine_alignment(const PointCloud3& source, const PointGrid& target,
                           const RigidPose& init, const IcpParams& params) {
  if (source.count() < 10 || target.size() < 10)
    throw DegenerateCloudError("refine_alignment: clouds too small");

  IcpResult result;
  result.pose = init;
  const std::size_t keep = std::max<std::size_t>(
      3, static_cast<std::size_t>(std::ceil(params.trim_fraction * source.count())));

  std::vector<Vec3> moved(source.count());
  std::vector<std::pair<double, std::size_t>> match_order(source.count());
  std::vector<Vec3> kept_src, kept_dst;
  kept_src.reserve(keep);
  kept_dst.reserve(keep);

  for (int iter = 0; iter < params.max_iterations; ++iter) {
    for (std::size_t i = 0; i < source.count(); ++i)
      moved[i] = result.pose.apply(source.points[i]);

    std::vector<std::size_t> nearest(source.count());
    for (std::size_t i = 0; i < source.count(); ++i) {
      const geom::NearestHit hit = target.nearest(moved[i]);
      nearest[i] = hit.index;
      match_order[i] = {hit.distance, i};
    }
    std::sort(match_order.begin(), match_order.end());

    kept_src.clear();
    kept_dst.clear();
    for (std::size_t k = 0; k < keep; ++k) {
      const std::size_t i = match_order[k].second;
      kept_src.push_back(moved[i]);
      kept_dst.push_back(target.points()[nearest[i]]);
    }
    const RigidPose update = kabsch(kept_src, kept_dst);
    result.pose = update * result.pose;

    const double step = update.rotation_angle() + update.translation.norm();
    if (step < params.tolerance) {
      result.converged = true;
      break;
    }
  }

  PointCloud3 aligned = source.transformed(result.pose);
  result.chamfer = unidirectional_chamfer(aligned, target);
  return result;
}

IcpResult refine_alignment(const PointCloud3& source, const PointCloud3& target,
                           const RigidPose& init, const IcpParams& params) {
  return refine_alignment(source, PointGrid(target.points), init, params);
}

RegistrationResult register_to_representative(const PointCloud3& object_cloud,
                                              const PointCloud3& rep_cloud,
                                              const OrientedBox& rep_box,
                                              const IcpParams& params) {
  const OrientedBox object_box = geom::fit_obb(object_cloud);
  const PointGrid target(rep_cloud.points);
  const std::vector<RigidPose> starts = initial_poses(object_box, rep_box);

  RegistrationResult result;
  result.attempts.reserve(starts.size());
  double best_cd = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < starts.size(); ++s) {
    IcpResult icp = refine_alignment(object_cloud, target, starts[s], params);
    result.attempts.push_back({starts[s], icp.pose, icp.chamfer, icp.converged});
    if (icp.chamfer < best_cd) {
      best_cd = icp.chamfer;
      result.best_attempt = static_cast<int>(s);
      result.pose = icp.pose;
    }
  }

  const double rep_dim = rep_cloud.largest_dimension();
  result.normalized_cd = rep_dim > 0 ? best_cd / rep_dim : best_cd;

  // carry the representative's box into the object frame, then grow the
  // extents until every observed object point fits
  const RigidPose inv = result.pose.inverse();
  OrientedBox box;
  box.axes = inv.rotation * rep_box.axes;
  box.center = inv.apply(rep_box.center);
  box.half_extents = rep_box.half_extents;
  for (const Vec3& p : object_cloud.points) {
    const Vec3 local = box.to_local(p).cwiseAbs();
    box.half_extents = box.half_extents.cwiseMax(local);
  }
  result.refined_box = box;
  return result;
}

}  // namespace objmap::regist
