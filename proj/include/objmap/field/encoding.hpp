#pragma once

#include <Eigen/Core>

#include <cmath>

#include "objmap/core/types.hpp"

namespace objmap::field {

inline int encoding_dim(int freq) { return 3 + 6 * freq; }

/// gamma_x: [x, sin(2^k pi x), cos(2^k pi x)] for k = 0..freq-1, per
/// component. Written into a row of a batch matrix.
template <class S, class Row>
void positional_encoding_into(Row row, S x, S y, S z, int freq) {
  row[0] = x;
  row[1] = y;
  row[2] = z;
  constexpr S pi = static_cast<S>(3.14159265358979323846);
  S scale = pi;
  for (int k = 0; k < freq; ++k) {
    const int base = 3 + 6 * k;
    row[base + 0] = std::sin(scale * x);
    row[base + 1] = std::sin(scale * y);
    row[base + 2] = std::sin(scale * z);
    row[base + 3] = std::cos(scale * x);
    row[base + 4] = std::cos(scale * y);
    row[base + 5] = std::cos(scale * z);
    scale *= S(2);
  }
}

/// Single-point convenience form.
inline Eigen::VectorXd positional_encoding(const Vec3& x, int freq) {
  Eigen::VectorXd out(encoding_dim(freq));
  positional_encoding_into<double>(out.data(), x.x(), x.y(), x.z(), freq);
  return out;
}

}  // namespace objmap::field
