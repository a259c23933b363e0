#pragma once

#include "objmap/field/model.hpp"

namespace objmap::field {

struct StepConfig {
  double lr = 1e-3;       // parameter step size
  double code_lr = 1e-3;  // latent code step size
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adaptive-moment accumulators mirroring the model and code shapes.
template <class S>
struct AdamState {
  GradientSet<S> m, v;
  long step = 0;

  static AdamState zeros(const FieldModel<S>& model, int n_members) {
    AdamState s;
    s.m = GradientSet<S>::zeros(model, n_members);
    s.v = GradientSet<S>::zeros(model, n_members);
    return s;
  }
};

/// One Adam update of the model parameters and active codes. Non-finite
/// gradients abort the step.
template <class S>
void optimizer_step(FieldModel<S>& model, CodeTable<S>& codes, const GradientSet<S>& grads,
                    AdamState<S>& state, const StepConfig& cfg) {
  if (!grads.finite())
    throw DivergenceError("optimizer_step: non-finite gradients");
  state.step += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));

  auto update = [&](auto& param, auto& m, auto& v, const auto& g, double lr) {
    m = (m * S(cfg.beta1) + g * S(1.0 - cfg.beta1)).eval();
    v = (v.array() * S(cfg.beta2) + g.array().square() * S(1.0 - cfg.beta2)).matrix().eval();
    param.array() -= S(lr) * (m.array() / S(bc1)) /
                     ((v.array() / S(bc2)).sqrt() + S(cfg.eps));
  };

  update(model.W1, state.m.W1, state.v.W1, grads.W1, cfg.lr);
  update(model.b1, state.m.b1, state.v.b1, grads.b1, cfg.lr);
  update(model.W2, state.m.W2, state.v.W2, grads.W2, cfg.lr);
  update(model.b2, state.m.b2, state.v.b2, grads.b2, cfg.lr);
  update(model.W3, state.m.W3, state.v.W3, grads.W3, cfg.lr);
  update(model.b3, state.m.b3, state.v.b3, grads.b3, cfg.lr);
  update(model.W4, state.m.W4, state.v.W4, grads.W4, cfg.lr);
  update(model.b4, state.m.b4, state.v.b4, grads.b4, cfg.lr);
  update(model.Wc1, state.m.Wc1, state.v.Wc1, grads.Wc1, cfg.lr);
  update(model.bc1, state.m.bc1, state.v.bc1, grads.bc1, cfg.lr);
  update(model.Wc2, state.m.Wc2, state.v.Wc2, grads.Wc2, cfg.lr);
  update(model.bc2, state.m.bc2, state.v.bc2, grads.bc2, cfg.lr);
  if (model.config.is_category() && codes.count() > 0) {
    update(codes.z_shape, state.m.z_shape, state.v.z_shape, grads.z_shape, cfg.code_lr);
    update(codes.z_texture, state.m.z_texture, state.v.z_texture, grads.z_texture,
           cfg.code_lr);
  }
}

}  // namespace objmap::field
