#include "objmap/synth/image_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

#include "objmap/core/types.hpp"

namespace objmap::synth {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void write_png(const std::string& path, int width, int height, int bit_depth,
               int color_type, const std::vector<png_bytep>& rows) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw IoError("cannot write " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("png write failed: " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void read_png(const std::string& path, int& width, int& height, int& bit_depth,
              int& color_type, std::vector<std::vector<png_byte>>& rows) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw IoError("cannot read " + path);
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("png read failed: " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  width = png_get_image_width(png, info);
  height = png_get_image_height(png, info);
  bit_depth = png_get_bit_depth(png, info);
  color_type = png_get_color_type(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  rows.assign(height, std::vector<png_byte>(rowbytes));
  std::vector<png_bytep> ptrs(height);
  for (int y = 0; y < height; ++y) ptrs[y] = rows[y].data();
  png_read_image(png, ptrs.data());
  png_destroy_read_struct(&png, &info, nullptr);
}

}  // namespace

void save_png_rgb(const Image<float>& r, const Image<float>& g, const Image<float>& b,
                  const std::string& path) {
  const int w = r.width, h = r.height;
  std::vector<std::vector<png_byte>> rows(h, std::vector<png_byte>(3 * w));
  std::vector<png_bytep> ptrs(h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      auto q = [](float v) {
        return static_cast<png_byte>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
      };
      rows[y][3 * x + 0] = q(r.at(x, y));
      rows[y][3 * x + 1] = q(g.at(x, y));
      rows[y][3 * x + 2] = q(b.at(x, y));
    }
    ptrs[y] = rows[y].data();
  }
  write_png(path, w, h, 8, PNG_COLOR_TYPE_RGB, ptrs);
}

void load_png_rgb(const std::string& path, Image<float>& r, Image<float>& g, Image<float>& b) {
  int w, h, depth, color;
  std::vector<std::vector<png_byte>> rows;
  read_png(path, w, h, depth, color, rows);
  if (depth != 8 || color != PNG_COLOR_TYPE_RGB)
    throw IoError("expected 8-bit RGB png: " + path);
  r = g = b = Image<float>(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      r.at(x, y) = rows[y][3 * x + 0] / 255.0f;
      g.at(x, y) = rows[y][3 * x + 1] / 255.0f;
      b.at(x, y) = rows[y][3 * x + 2] / 255.0f;
    }
}

void save_png_gray16(const Image<std::uint16_t>& img, const std::string& path) {
  const int w = img.width, h = img.height;
  std::vector<std::vector<png_byte>> rows(h, std::vector<png_byte>(2 * w));
  std::vector<png_bytep> ptrs(h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::uint16_t v = img.at(x, y);
      rows[y][2 * x + 0] = static_cast<png_byte>(v >> 8);  // PNG is big-endian
      rows[y][2 * x + 1] = static_cast<png_byte>(v & 0xff);
    }
    ptrs[y] = rows[y].data();
  }
  write_png(path, w, h, 16, PNG_COLOR_TYPE_GRAY, ptrs);
}

Image<std::uint16_t> load_png_gray16(const std::string& path) {
  int w, h, depth, color;
  std::vector<std::vector<png_byte>> rows;
  read_png(path, w, h, depth, color, rows);
  if (depth != 16 || color != PNG_COLOR_TYPE_GRAY)
    throw IoError("expected 16-bit gray png: " + path);
  Image<std::uint16_t> img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      img.at(x, y) = static_cast<std::uint16_t>((rows[y][2 * x] << 8) | rows[y][2 * x + 1]);
  return img;
}

void save_pfm(const Image<float>& img, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  f << "Pf\n" << img.width << " " << img.height << "\n-1.0\n";
  // bottom-to-top rows
  for (int y = img.height - 1; y >= 0; --y)
    f.write(reinterpret_cast<const char*>(&img.data[static_cast<std::size_t>(y) * img.width]),
            static_cast<std::streamsize>(img.width * sizeof(float)));
  if (!f) throw IoError("write failed: " + path);
}

Image<float> load_pfm(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path);
  std::string magic;
  int w, h;
  double scale;
  f >> magic >> w >> h >> scale;
  if (magic != "Pf" || scale > 0) throw IoError("expected little-endian grayscale PFM: " + path);
  f.get();  // single whitespace after the header
  Image<float> img(w, h);
  for (int y = h - 1; y >= 0; --y)
    f.read(reinterpret_cast<char*>(&img.data[static_cast<std::size_t>(y) * w]),
           static_cast<std::streamsize>(w * sizeof(float)));
  if (!f) throw IoError("truncated PFM: " + path);
  return img;
}

}  // namespace objmap::synth
