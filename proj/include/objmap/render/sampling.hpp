#pragma once

#include <optional>
#include <vector>

#include "objmap/core/rng.hpp"
#include "objmap/core/types.hpp"

namespace objmap::render {

/// p(s) = origin + s * march. For camera rays `march` is scaled so s is
/// z-depth; for sphere rays it is a unit direction and s is meters.
struct Ray {
  Vec3 origin = Vec3::Zero();
  Vec3 march = Vec3::UnitZ();

  Vec3 at(double s) const { return origin + s * march; }
};

struct RaySampleSet {
  Ray ray;
  std::vector<double> depths;  // strictly ascending, all <= t_max
  double t_max = 0.0;
};

/// Depth-guided sampling: with a valid observed depth D, ceil(N/2)
/// stratified samples cover [t_near, D - 3*sigma] and the rest fall
/// uniformly in the surface band [D - sigma, D + sigma]; without depth (or
/// when the band lies beyond t_max) all N samples are stratified over
/// [t_near, t_max].
RaySampleSet sample_depth_guided(const Ray& ray, std::optional<double> observed_depth,
                                 double t_near, double t_max, int n, double sigma_d,
                                 Rng& rng);

}  // namespace objmap::render
