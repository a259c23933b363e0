#include "objmap/render/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace objmap::render {

namespace {

void stratified(double lo, double hi, int n, Rng& rng, std::vector<double>& out) {
  const double step = (hi - lo) / n;
  for (int i = 0; i < n; ++i) out.push_back(lo + step * (i + rng.uniform()));
}

}  // namespace

RaySampleSet sample_depth_guided(const Ray& ray, std::optional<double> observed_depth,
                                 double t_near, double t_max, int n, double sigma_d,
                                 Rng& rng) {
  if (n < 2) throw Error("sample_depth_guided: need at least 2 samples");
  if (t_max <= t_near) throw Error("sample_depth_guided: empty sampling range");

  RaySampleSet set;
  set.ray = ray;
  set.t_max = t_max;
  set.depths.reserve(n);

  const bool band_reachable =
      observed_depth && *observed_depth > 0.0 && *observed_depth - sigma_d < t_max;
  if (band_reachable) {
    const double d = *observed_depth;
    const int n_front = (n + 1) / 2;
    const double front_hi = std::min(d - 3.0 * sigma_d, t_max);
    const double band_lo = std::max(t_near, d - sigma_d);
    const double band_hi = std::min(d + sigma_d, t_max);
    if (front_hi > t_near) {
      stratified(t_near, front_hi, n_front, rng, set.depths);
      for (int i = n_front; i < n; ++i) set.depths.push_back(rng.uniform(band_lo, band_hi));
    } else {
      // surface hugs the near bound; spend the whole budget on the band
      for (int i = 0; i < n; ++i) set.depths.push_back(rng.uniform(band_lo, band_hi));
    }
  } else {
    stratified(t_near, t_max, n, rng, set.depths);
  }

  for (double& s : set.depths) s = std::min(s, t_max);
  std::sort(set.depths.begin(), set.depths.end());
  for (int i = 1; i < n; ++i)
    if (set.depths[i] <= set.depths[i - 1])
      set.depths[i] = std::nextafter(set.depths[i - 1], 1e300);
  if (set.depths.back() > t_max) {
    set.depths.back() = t_max;
    for (int i = n - 2; i >= 0; --i)
      if (set.depths[i] >= set.depths[i + 1])
        set.depths[i] = std::nextafter(set.depths[i + 1], -1e300);
  }
  return set;
}

}  // namespace objmap::render
