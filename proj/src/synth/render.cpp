#include "objmap/synth/render.hpp"

#include <cmath>

namespace objmap::synth {

namespace {
const Vec3 kLightDir = Vec3(0.4, 0.25, 1.0).normalized();
constexpr double kAmbient = 0.35;
constexpr double kDiffuse = 0.65;

float quantize8(double v) {
  const int q = static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
  return static_cast<float>(q) / 255.0f;
}
}  // namespace

RigidPose look_at(const Vec3& eye, const Vec3& target) {
  RigidPose pose;
  const Vec3 z = (target - eye).normalized();
  Vec3 up = Vec3::UnitZ();
  if (std::abs(z.dot(up)) > 1.0 - 1e-6) up = Vec3::UnitY();
  const Vec3 x = z.cross(up).normalized();
  const Vec3 y = z.cross(x);
  pose.rotation.col(0) = x;
  pose.rotation.col(1) = y;
  pose.rotation.col(2) = z;
  pose.translation = eye;
  return pose;
}

Frame render_frame(const Scene& scene, const RigidPose& camera, const Intrinsics& K,
                   int width, int height) {
  if (!K.valid() || width < 16 || height < 16)
    throw ConfigError("render_frame: invalid intrinsics or image size");

  Frame frame;
  frame.camera = camera;
  frame.intrinsics = K;
  frame.rgb_r = frame.rgb_g = frame.rgb_b = Image<float>(width, height, 0.0f);
  frame.depth = Image<float>(width, height, 0.0f);
  frame.instance_mask = Image<std::uint16_t>(width, height, 0);
  frame.semantic_mask = Image<std::uint16_t>(width, height, 0);

  const Vec3 origin = camera.translation;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      // march vector has unit camera-z component: ray parameter == z-depth
      const Vec3 march = pixel_march(K, camera, x, y);

      double best = std::numeric_limits<double>::infinity();
      Vec3 best_n = Vec3::Zero();
      const ScenePrimitive* best_prim = nullptr;
      for (const auto& prim : scene.desc.objects) {
        double t;
        Vec3 n;
        if (intersect_primitive(prim, origin, march, 1e-9, t, n) && t < best) {
          best = t;
          best_n = n;
          best_prim = &prim;
        }
      }
      bool floor_hit = false;
      if (scene.desc.floor_enabled && std::abs(march.z()) > 1e-15) {
        const double t = (scene.desc.floor_z - origin.z()) / march.z();
        if (t > 1e-9 && t < best) {
          best = t;
          best_n = Vec3::UnitZ();
          best_prim = nullptr;
          floor_hit = true;
        }
      }
      if (!std::isfinite(best)) continue;

      frame.depth.at(x, y) = static_cast<float>(best);
      RGB albedo = floor_hit ? scene.desc.floor_albedo : best_prim->albedo;
      const double shade = kAmbient + kDiffuse * std::max(0.0, best_n.dot(kLightDir));
      frame.rgb_r.at(x, y) = quantize8(albedo.x() * shade);
      frame.rgb_g.at(x, y) = quantize8(albedo.y() * shade);
      frame.rgb_b.at(x, y) = quantize8(albedo.z() * shade);
      if (best_prim) {
        frame.instance_mask.at(x, y) = static_cast<std::uint16_t>(best_prim->instance_id);
        frame.semantic_mask.at(x, y) = scene.class_id(best_prim->semantic_class);
      }
    }
  }
  return frame;
}

std::vector<std::pair<double, RigidPose>> orbit_poses(const OrbitTrajectory& traj) {
  std::vector<std::pair<double, RigidPose>> out;
  const int n = traj.frame_count;
  if (n < 1) throw ConfigError("trajectory needs at least one frame");
  for (int i = 0; i < n; ++i) {
    const double az = traj.start_deg + (traj.end_deg - traj.start_deg) * (i + 0.5) / n;
    const double rad = az * M_PI / 180.0;
    const Vec3 eye = traj.center + Vec3(traj.radius * std::cos(rad),
                                        traj.radius * std::sin(rad), traj.height);
    double az_norm = std::fmod(az, 360.0);
    if (az_norm < 0) az_norm += 360.0;
    out.emplace_back(az_norm, look_at(eye, traj.center));
  }
  return out;
}

FrameSequence render_sequence(const Scene& scene) {
  FrameSequence seq;
  for (const auto& [az, pose] : orbit_poses(scene.desc.trajectory)) {
    seq.frames.push_back(render_frame(scene, pose, scene.desc.intrinsics,
                                      scene.desc.width, scene.desc.height));
    seq.azimuth_deg.push_back(az);
  }
  return seq;
}

}  // namespace objmap::synth
