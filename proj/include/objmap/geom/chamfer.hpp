#pragma once

#include "objmap/geom/nn.hpp"

namespace objmap::geom {

/// Mean nearest-neighbor distance from every point of P to the cloud Q.
/// Asymmetric: P is typically the partially observed source. Exact brute
/// force below `kBruteForceLimit` points per cloud, grid-accelerated above
/// (both exact; they agree to full precision).
double unidirectional_chamfer(const PointCloud3& P, const PointCloud3& Q);

/// Same value, against a prebuilt index (used inside registration loops).
double unidirectional_chamfer(const PointCloud3& P, const PointGrid& Q);

inline constexpr std::size_t kBruteForceLimit = 50000;

}  // namespace objmap::geom
