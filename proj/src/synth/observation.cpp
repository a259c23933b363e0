#include "objmap/synth/observation.hpp"

#include <cmath>

namespace objmap::synth {

PixelBox mask_bbox(const Frame& frame, int instance_id) {
  PixelBox box;
  box.x0 = frame.width();
  box.y0 = frame.height();
  for (int y = 0; y < frame.height(); ++y)
    for (int x = 0; x < frame.width(); ++x)
      if (frame.instance_mask.at(x, y) == instance_id) {
        box.x0 = std::min(box.x0, x);
        box.y0 = std::min(box.y0, y);
        box.x1 = std::max(box.x1, x);
        box.y1 = std::max(box.y1, y);
      }
  return box;
}

Vec3 unproject(const Frame& frame, int x, int y) {
  const double d = frame.depth.at(x, y);
  const Vec3 cam_point = pixel_dir_cam(frame.intrinsics, x, y) * d;
  return frame.camera.apply(cam_point);
}

std::vector<std::size_t> coverage_frames(const FrameSequence& seq, double start_deg,
                                         double end_deg, int instance_id) {
  std::vector<std::size_t> out;
  const bool full = end_deg - start_deg >= 360.0;
  double s = std::fmod(start_deg, 360.0), e = std::fmod(end_deg, 360.0);
  if (s < 0) s += 360.0;
  if (e < 0) e += 360.0;
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    const double az = seq.azimuth_deg[i];
    bool inside = full || (s <= e ? (az >= s && az <= e) : (az >= s || az <= e));
    if (!inside) continue;
    if (!mask_bbox(seq.frames[i], instance_id).empty()) out.push_back(i);
  }
  return out;
}

ObjectObservation back_project(const FrameSequence& seq, int instance_id,
                               const std::vector<std::size_t>& frame_indices, double voxel) {
  ObjectObservation obs;
  obs.instance_id = instance_id;
  PointCloud3 raw;
  for (std::size_t fi : frame_indices) {
    const Frame& frame = seq.frames[fi];
    const PixelBox box = mask_bbox(frame, instance_id);
    if (box.empty()) continue;
    obs.keyframes.push_back({fi, box});
    for (int y = box.y0; y <= box.y1; ++y)
      for (int x = box.x0; x <= box.x1; ++x)
        if (frame.instance_mask.at(x, y) == instance_id && frame.depth.at(x, y) > 0.0f)
          raw.points.push_back(unproject(frame, x, y));
  }
  if (raw.empty())
    throw Error("instance " + std::to_string(instance_id) + " was never observed");
  obs.cloud = voxel_downsample(raw, voxel);
  return obs;
}

ObjectObservation back_project(const FrameSequence& seq, int instance_id, double voxel) {
  std::vector<std::size_t> all(seq.frames.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return back_project(seq, instance_id, all, voxel);
}

double occlusion_truncate(const Frame& frame, int x, int y, int instance_id,
                          double delta_stop, double t_far) {
  const int owner = frame.instance_mask.at(x, y);
  if (owner != 0 && owner != instance_id) {
    const double occluder_depth = frame.depth.at(x, y);
    if (occluder_depth > 0.0) return occluder_depth + delta_stop;
  }
  return t_far;
}

}  // namespace objmap::synth
