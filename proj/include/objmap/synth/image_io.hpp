#pragma once

#include <string>

#include "objmap/synth/frame.hpp"

namespace objmap::synth {

/// 8-bit RGB PNG. Values outside [0,1] are clamped on write.
void save_png_rgb(const Image<float>& r, const Image<float>& g, const Image<float>& b,
                  const std::string& path);
void load_png_rgb(const std::string& path, Image<float>& r, Image<float>& g, Image<float>& b);

/// 16-bit grayscale PNG (masks).
void save_png_gray16(const Image<std::uint16_t>& img, const std::string& path);
Image<std::uint16_t> load_png_gray16(const std::string& path);

/// Grayscale PFM, float32 little-endian, bottom-to-top rows (scale -1).
void save_pfm(const Image<float>& img, const std::string& path);
Image<float> load_pfm(const std::string& path);

}  // namespace objmap::synth
