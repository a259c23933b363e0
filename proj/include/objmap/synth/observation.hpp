#pragma once

#include <vector>

#include "objmap/geom/obb.hpp"
#include "objmap/synth/frame.hpp"

namespace objmap::synth {

using geom::OrientedBox;
using geom::PointCloud3;

struct PixelBox {
  int x0 = 0, y0 = 0, x1 = -1, y1 = -1;  // inclusive
  bool empty() const { return x1 < x0 || y1 < y0; }
  long width() const { return x1 - x0 + 1; }
  long height() const { return y1 - y0 + 1; }
  long pixel_count() const { return empty() ? 0 : width() * height(); }
};

struct KeyframeObservation {
  std::size_t frame_index = 0;
  PixelBox bbox;  // 2D bounding box of the instance mask in that frame
};

/// Everything gathered about one scene instance from its keyframes.
struct ObjectObservation {
  int instance_id = 0;
  std::string semantic_class;
  std::vector<KeyframeObservation> keyframes;
  PointCloud3 cloud;  // back-projected, voxel-downsampled, world frame
};

PixelBox mask_bbox(const Frame& frame, int instance_id);

/// Back-projects every masked pixel with depth > 0 of the given instance
/// across the selected frames and voxel-downsamples the result.
ObjectObservation back_project(const FrameSequence& seq, int instance_id,
                               const std::vector<std::size_t>& frame_indices,
                               double voxel = 0.01);

/// Convenience overload over all frames where the instance is visible.
ObjectObservation back_project(const FrameSequence& seq, int instance_id, double voxel = 0.01);

/// Frames whose azimuth lies in the instance's coverage window (wrapping)
/// and where the instance is visible.
std::vector<std::size_t> coverage_frames(const FrameSequence& seq, double start_deg,
                                         double end_deg, int instance_id);

/// Ray termination bound for a pixel in the instance's 2D bounding box:
/// full range unless the pixel shows a different instance, in which case
/// sampling must stop just past the occluder surface.
double occlusion_truncate(const Frame& frame, int x, int y, int instance_id,
                          double delta_stop, double t_far);

/// Unprojects pixel (x,y) at the stored z-depth into the world frame.
Vec3 unproject(const Frame& frame, int x, int y);

}  // namespace objmap::synth
