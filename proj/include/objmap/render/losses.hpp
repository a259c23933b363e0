#pragma once

#include <map>

#include "objmap/field/model.hpp"
#include "objmap/render/volume.hpp"

namespace objmap::render {

using field::CodeTable;
using field::FieldModel;
using field::ForwardTrace;
using field::GradientSet;
using field::MatX;
using field::OutputGradients;
using field::VecX;

struct LossWeights {
  double lambda_color = 5.0;
  double lambda_opacity = 10.0;
  double lambda_reg = 0.0005;
};

struct ObjectLossTerms {
  double depth = 0.0, color = 0.0, opacity = 0.0, reg = 0.0;
};

struct LossBreakdown {
  std::map<int, ObjectLossTerms> per_object;  // key: code-table member row
  double depth = 0.0, color = 0.0, opacity = 0.0, reg = 0.0;
  double total = 0.0;
  LossWeights weights;
};

/// A training batch of rays over one model. Points are flattened
/// ray-major: point (r, i) sits at row r * n_samples + i.
template <class S>
struct RayBatch {
  int n_rays = 0, n_samples = 0;
  MatX<S> points;                  // (n_rays*n_samples) x 3, normalized cube
  std::vector<int> point_member;   // code row per point (empty for object models)
  VecX<S> sample_depth;            // per point
  VecX<S> target_depth;            // per ray; 0 = missing (hole)
  MatX<S> target_color;            // n_rays x 3
  VecX<S> mask;                    // per ray, 0 or 1
  std::vector<int> ray_member;     // code row per ray (-1 for object models)
};

/// The recorded loss: values plus everything backward() needs.
template <class S>
struct LossNode {
  LossBreakdown values;
  OutputGradients<S> output_grads;
  MatX<S> d_code_shape, d_code_texture;  // regularizer gradients, per member
  bool recorded = false;
};

namespace detail {
template <class S>
inline S sgn(S x) {
  return x > S(0) ? S(1) : (x < S(0) ? S(-1) : S(0));
}
}  // namespace detail

/// Masked L1 depth/color losses, opacity loss over all rays, and the code
/// regularizer, together with gradients w.r.t. the network outputs.
/// Rendering happens inside, from the trace's occupancies and colors.
template <class S>
LossNode<S> compute_losses(const RayBatch<S>& batch, const ForwardTrace<S>& trace,
                           const CodeTable<S>& codes, const LossWeights& weights,
                           bool with_grads = true) {
  const int nr = batch.n_rays, ns = batch.n_samples;
  if (trace.n != nr * ns) throw Error("compute_losses: trace/batch size mismatch");
  if (!batch.ray_member.empty() && static_cast<int>(batch.ray_member.size()) != nr)
    throw Error("compute_losses: ray ownership mismatch");

  LossNode<S> node;
  node.values.weights = weights;
  node.recorded = with_grads && trace.recorded;
  if (with_grads) {
    node.output_grads.d_logit = VecX<S>::Zero(trace.n);
    node.output_grads.d_color = MatX<S>::Zero(trace.n, 3);
  }

  std::vector<S> w(ns), dw(ns), d_occ(ns);
  for (int r = 0; r < nr; ++r) {
    const int base = r * ns;
    compute_weights(trace.occupancy.data() + base, ns, w.data());

    S opacity = S(0), depth = S(0);
    S col[3] = {S(0), S(0), S(0)};
    for (int i = 0; i < ns; ++i) {
      opacity += w[i];
      depth += w[i] * batch.sample_depth[base + i];
      for (int ch = 0; ch < 3; ++ch) col[ch] += w[i] * trace.color(base + i, ch);
    }

    const S mask = batch.mask[r];
    const S target_d = batch.target_depth[r];
    const bool depth_valid = mask > S(0.5) && target_d > S(0);

    const int member = batch.ray_member.empty() ? 0 : batch.ray_member[r];
    ObjectLossTerms& terms = node.values.per_object[member];

    S d_opacity = detail::sgn(opacity - mask);
    terms.opacity += static_cast<double>((opacity - mask) * d_opacity);
    S d_depth = S(0);
    if (depth_valid) {
      d_depth = detail::sgn(depth - target_d);
      terms.depth += static_cast<double>((depth - target_d) * d_depth);
    }
    S d_col[3] = {S(0), S(0), S(0)};
    if (mask > S(0.5)) {
      for (int ch = 0; ch < 3; ++ch) {
        d_col[ch] = detail::sgn(col[ch] - batch.target_color(r, ch));
        terms.color += static_cast<double>((col[ch] - batch.target_color(r, ch)) * d_col[ch]);
      }
    }

    if (!with_grads) continue;

    // dL/dw_i, then back through the prefix products
    const S lo = S(weights.lambda_opacity), lc = S(weights.lambda_color);
    for (int i = 0; i < ns; ++i) {
      S g = lo * d_opacity;
      if (depth_valid) g += d_depth * batch.sample_depth[base + i];
      for (int ch = 0; ch < 3; ++ch) g += lc * d_col[ch] * trace.color(base + i, ch);
      dw[i] = g;
    }
    weights_backward(trace.occupancy.data() + base, dw.data(), ns, d_occ.data());
    for (int i = 0; i < ns; ++i) {
      const S o = trace.occupancy[base + i];
      node.output_grads.d_logit[base + i] = d_occ[i] * o * (S(1) - o);
      for (int ch = 0; ch < 3; ++ch) {
        const S c = trace.color(base + i, ch);
        node.output_grads.d_color(base + i, ch) =
            lc * d_col[ch] * w[i] * c * (S(1) - c);
      }
    }
  }

  // latent regularizer over every member of the model
  if (codes.count() > 0) {
    for (int k = 0; k < codes.count(); ++k) {
      const double reg = static_cast<double>(codes.z_shape.row(k).squaredNorm() +
                                             codes.z_texture.row(k).squaredNorm());
      node.values.per_object[k].reg += reg;
    }
    if (with_grads) {
      node.d_code_shape = S(2) * S(weights.lambda_reg) * codes.z_shape;
      node.d_code_texture = S(2) * S(weights.lambda_reg) * codes.z_texture;
    }
  }

  for (const auto& [k, t] : node.values.per_object) {
    node.values.depth += t.depth;
    node.values.color += t.color;
    node.values.opacity += t.opacity;
    node.values.reg += t.reg;
  }
  node.values.total = node.values.depth + weights.lambda_color * node.values.color +
                      weights.lambda_opacity * node.values.opacity +
                      weights.lambda_reg * node.values.reg;
  return node;
}

/// Reverse pass of the full loss: network parameters plus latent codes.
template <class S>
GradientSet<S> backward(const FieldModel<S>& model, const CodeTable<S>& codes,
                        const ForwardTrace<S>& trace, const LossNode<S>& node) {
  if (!node.recorded) throw Error("backward: loss node is detached (no recorded trace)");
  GradientSet<S> g = field::backward(model, codes, trace, node.output_grads);
  if (codes.count() > 0) {
    g.z_shape += node.d_code_shape;
    g.z_texture += node.d_code_texture;
  }
  return g;
}

}  // namespace objmap::render
