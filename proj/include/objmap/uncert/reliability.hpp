#pragma once

#include <cmath>
#include <span>

#include "objmap/core/types.hpp"

namespace objmap::uncert {

/// Band-stop parameters of the reliability metric. The m-band separates
/// empty rays from uncertain ones, the M-band uncertain from sharp ones;
/// kappa is the sigmoid value attained at the band edges.
struct ReliabilityParams {
  double alpha_u = 1.0;  // entropy scale in u(r)
  double m1 = 0.1, m2 = 0.15;
  double M1 = 0.57, M2 = 0.65;
  double kappa = 0.9;
  double eta_rep = 0.5;  // representative-selection threshold on g

  bool valid() const {
    return 0 < m1 && m1 < m2 && m2 < M1 && M1 < M2 && 0.5 < kappa && kappa < 1 &&
           0 < eta_rep && eta_rep < 1;
  }
};

/// Weight-distribution entropy H(r) = -sum w_i ln(w_i), with 0 ln 0 = 0.
/// Weights are used raw, not renormalized.
inline double ray_entropy(std::span<const double> weights) {
  double h = 0.0;
  for (double w : weights)
    if (w > 0.0) h -= w * std::log(w);
  return h;
}

/// u(r) = (sum w_i) * exp(-alpha * H(r)); in [0,1] whenever sum w <= 1.
inline double ray_uncertainty(std::span<const double> weights, double alpha_u = 1.0) {
  double sum = 0.0;
  for (double w : weights) sum += w;
  return sum * std::exp(-alpha_u * ray_entropy(weights));
}

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// g(u): sum of two opposing sigmoids. Rays over empty space or sharply
/// learned surfaces score near 1; the uncertain middle band scores near 0.
inline double reliability(double u, const ReliabilityParams& p) {
  const double slope = 2.0 * std::log(p.kappa / (1.0 - p.kappa));
  const double alpha_m = slope / (p.m2 - p.m1);
  const double alpha_M = slope / (p.M2 - p.M1);
  const double beta_m = 0.5 * (p.m1 + p.m2);
  const double beta_M = 0.5 * (p.M1 + p.M2);
  return logistic(-alpha_m * (u - beta_m)) + logistic(alpha_M * (u - beta_M));
}

}  // namespace objmap::uncert
