#pragma once

#include <Eigen/Core>

#include <vector>

#include "objmap/core/types.hpp"

namespace objmap::render {

/// Termination weights from occupancies: w_i = o_i * prod_{j<i} (1 - o_j).
/// Prefix products run left to right.
template <class S>
void compute_weights(const S* occupancy, int n, S* weights) {
  S transmittance = S(1);
  for (int i = 0; i < n; ++i) {
    weights[i] = occupancy[i] * transmittance;
    transmittance *= (S(1) - occupancy[i]);
  }
}

inline std::vector<double> compute_weights(const std::vector<double>& occupancy) {
  std::vector<double> w(occupancy.size());
  compute_weights(occupancy.data(), static_cast<int>(occupancy.size()), w.data());
  return w;
}

/// dL/do_i given dL/dw_i, without forming 1/(1-o) terms:
///   dL/do_i = T_i * (G_i - A_i),  A_i = G_{i+1} o_{i+1} + (1-o_{i+1}) A_{i+1}
template <class S>
void weights_backward(const S* occupancy, const S* d_weight, int n, S* d_occupancy) {
  // backward accumulator
  S a = S(0);
  std::vector<S> acc(n);
  for (int i = n - 1; i >= 0; --i) {
    acc[i] = a;
    a = d_weight[i] * occupancy[i] + (S(1) - occupancy[i]) * a;
  }
  S transmittance = S(1);
  for (int i = 0; i < n; ++i) {
    d_occupancy[i] = transmittance * (d_weight[i] - acc[i]);
    transmittance *= (S(1) - occupancy[i]);
  }
}

/// Per-ray sequence of termination weights with sample depths and colors.
struct WeightProfile {
  std::vector<double> occupancies;
  std::vector<double> weights;
  std::vector<RGB> colors;
  std::vector<double> depths;
};

struct RenderedRay {
  RGB color = RGB::Zero();
  double depth = 0.0;
  double opacity = 0.0;
};

/// Weighted-sum rendering: C = sum w_i c_i, D = sum w_i d_i, O = sum w_i.
inline RenderedRay render_ray(const WeightProfile& profile) {
  RenderedRay out;
  for (std::size_t i = 0; i < profile.weights.size(); ++i) {
    const double w = profile.weights[i];
    out.opacity += w;
    out.depth += w * profile.depths[i];
    if (!profile.colors.empty()) out.color += w * profile.colors[i];
  }
  return out;
}

/// Profile from occupancies + depths (+ optional colors).
inline WeightProfile make_profile(std::vector<double> occupancies, std::vector<double> depths,
                                  std::vector<RGB> colors = {}) {
  WeightProfile p;
  p.weights = compute_weights(occupancies);
  p.occupancies = std::move(occupancies);
  p.depths = std::move(depths);
  p.colors = std::move(colors);
  return p;
}

}  // namespace objmap::render
