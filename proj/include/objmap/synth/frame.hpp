#pragma once

#include <cstdint>
#include <vector>

#include "objmap/synth/camera.hpp"

namespace objmap::synth {

template <class T>
struct Image {
  int width = 0, height = 0;
  std::vector<T> data;

  Image() = default;
  Image(int w, int h, T fill = T{}) : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  T& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  const T& at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

/// One posed RGB-D frame with instance/semantic masks. Pixel data is stored
/// file-exact: rgb quantized to 8 bits per channel, depth rounded to
/// float32, so exporting and re-importing a frame is lossless.
struct Frame {
  RigidPose camera;       // camera -> world
  Intrinsics intrinsics;
  Image<float> rgb_r, rgb_g, rgb_b;   // [0,1], 8-bit quantized values
  Image<float> depth;                 // z-depth, meters; 0 = no hit
  Image<std::uint16_t> instance_mask; // 0 = background
  Image<std::uint16_t> semantic_mask; // 0 = background

  int width() const { return depth.width; }
  int height() const { return depth.height; }

  RGB rgb_at(int x, int y) const {
    return {rgb_r.at(x, y), rgb_g.at(x, y), rgb_b.at(x, y)};
  }
};

struct FrameSequence {
  std::vector<Frame> frames;
  std::vector<double> azimuth_deg;  // trajectory azimuth per frame
};

}  // namespace objmap::synth
