#pragma once

#include "objmap/geom/pose.hpp"

namespace objmap::synth {

using geom::RigidPose;

struct Intrinsics {
  double fx = 0, fy = 0, cx = 0, cy = 0;
  bool valid() const { return fx > 0 && fy > 0; }
};

/// Direction through pixel center in camera frame, scaled so the z
/// component is 1: advancing the ray parameter by s advances z-depth by s.
inline Vec3 pixel_dir_cam(const Intrinsics& K, int x, int y) {
  return {(x + 0.5 - K.cx) / K.fx, (y + 0.5 - K.cy) / K.fy, 1.0};
}

/// World-frame march vector for a pixel; camera pose maps camera to world.
inline Vec3 pixel_march(const Intrinsics& K, const RigidPose& cam, int x, int y) {
  return cam.rotation * pixel_dir_cam(K, x, y);
}

/// Camera pose looking from `eye` to `target`, vision convention
/// (x right, y down, z forward).
RigidPose look_at(const Vec3& eye, const Vec3& target);

}  // namespace objmap::synth
