#pragma once

#include <vector>

#include "objmap/geom/chamfer.hpp"
#include "objmap/geom/obb.hpp"
#include "objmap/geom/pose.hpp"

namespace objmap::regist {

using geom::OrientedBox;
using geom::PointCloud3;
using geom::PointGrid;
using geom::RigidPose;

struct IcpParams {
  int max_iterations = 50;
  double trim_fraction = 0.8;  // matches kept per iteration
  double tolerance = 1e-6;     // rotation angle + translation update
};

struct IcpResult {
  RigidPose pose;          // source -> target
  double chamfer = 0.0;    // unidirectional, transformed source vs target
  bool converged = false;
};

struct AttemptRecord {
  RigidPose init;
  RigidPose final;
  double chamfer = 0.0;
  bool converged = false;
};

struct RegistrationResult {
  RigidPose pose;            // object -> representative frame
  OrientedBox refined_box;   // representative axes carried into the object
  double normalized_cd = 0.0;
  std::vector<AttemptRecord> attempts;  // all 24 starts
  int best_attempt = 0;
};

/// The 24 proper rotations of the axis-permutation group, composed with the
/// frame alignment source box -> target box; every pose maps the source
/// center onto the target center.
std::vector<RigidPose> initial_poses(const OrientedBox& source_box,
                                     const OrientedBox& target_box);

/// Trimmed point-to-point ICP: nearest-neighbor matches, best
/// `trim_fraction` kept, rigid update from the cross-covariance SVD.
IcpResult refine_alignment(const PointCloud3& source, const PointGrid& target,
                           const RigidPose& init, const IcpParams& params);
IcpResult refine_alignment(const PointCloud3& source, const PointCloud3& target,
                           const RigidPose& init, const IcpParams& params);

/// Runs all 24 starts, keeps the minimum-chamfer alignment, carries the
/// representative's box into the object's frame (extents grown to cover the
/// object's observed points), and normalizes the chamfer by the
/// representative cloud's largest dimension.
RegistrationResult register_to_representative(const PointCloud3& object_cloud,
                                              const PointCloud3& rep_cloud,
                                              const OrientedBox& rep_box,
                                              const IcpParams& params);

}  // namespace objmap::regist
