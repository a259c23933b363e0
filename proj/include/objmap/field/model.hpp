#pragma once

#include <functional>
#include <string>
#include <vector>

#include "objmap/core/rng.hpp"
#include "objmap/field/encoding.hpp"

namespace objmap::field {

struct ModelConfig {
  int hidden = 32;       // trunk width (32 foreground, 128 background)
  int code_dim = 0;      // 0 = object-level, 32 = category-level
  int freq = 4;          // positional encoding frequencies
  int feature_dim = 32;  // geometry feature v fed to the color head
  int head_hidden = 32;

  bool is_category() const { return code_dim > 0; }
  int enc_dim() const { return encoding_dim(freq); }
  int trunk_in() const { return enc_dim() + code_dim; }
  int trunk_out() const { return 1 + feature_dim; }  // occupancy logit + v
  int head_in() const { return feature_dim + code_dim; }

  bool operator==(const ModelConfig&) const = default;
};

template <class S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using RowMatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <class S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using RowX = Eigen::Matrix<S, 1, Eigen::Dynamic>;

/// Per-object latent codes of one category model (empty for object-level).
/// Row k holds the codes of the object at member index k.
template <class S>
struct CodeTable {
  std::vector<int> owner_ids;
  MatX<S> z_shape;    // n x code_dim
  MatX<S> z_texture;  // n x code_dim

  int count() const { return static_cast<int>(owner_ids.size()); }

  static CodeTable zeros(const std::vector<int>& ids, int code_dim) {
    CodeTable t;
    t.owner_ids = ids;
    t.z_shape = MatX<S>::Zero(static_cast<int>(ids.size()), code_dim);
    t.z_texture = MatX<S>::Zero(static_cast<int>(ids.size()), code_dim);
    return t;
  }
};

/// Occupancy + color field. Trunk (softplus) maps the encoded point and
/// shape code to an occupancy logit and feature v; the color head (relu)
/// maps v and the texture code to color logits. Occupancy and color pass
/// through the logistic map, so outputs live strictly inside (0,1).
template <class S>
struct FieldModel {
  ModelConfig config;
  MatX<S> W1, W2, W3, W4;  // trunk; W4 column 0 is the occupancy logit
  RowX<S> b1, b2, b3, b4;
  MatX<S> Wc1, Wc2;        // color head
  RowX<S> bc1, bc2;

  static FieldModel initialized(const ModelConfig& cfg, std::uint64_t seed);

  std::size_t parameter_count() const;

  /// Visits every parameter tensor in a fixed order (checkpoint order).
  template <class Fn>
  void for_each_tensor(Fn&& fn) {
    fn("W1", W1); fn("b1", b1); fn("W2", W2); fn("b2", b2);
    fn("W3", W3); fn("b3", b3); fn("W4", W4); fn("b4", b4);
    fn("Wc1", Wc1); fn("bc1", bc1); fn("Wc2", Wc2); fn("bc2", bc2);
  }
  template <class Fn>
  void for_each_tensor(Fn&& fn) const {
    const_cast<FieldModel*>(this)->for_each_tensor(
        [&](const char* name, auto& t) { fn(name, std::as_const(t)); });
  }
};

/// Recorded activations of one batched forward pass; required by backward.
template <class S>
struct ForwardTrace {
  bool recorded = false;
  int n = 0;
  std::vector<int> point_member;  // code-table row per point (-1 for none)
  RowMatX<S> X;                   // n x trunk_in, row-major (filled per point)
  MatX<S> Z1, H1, Z2, H2, Z3, H3; // trunk pre/post activations
  MatX<S> O4;                     // n x (1 + feature_dim)
  RowMatX<S> T0;                  // n x head_in, row-major (filled per point)
  MatX<S> G1p, G1;                // head pre/post
  MatX<S> M;                      // n x 3 color logits
  VecX<S> occupancy;              // n, logistic of O4 col 0
  MatX<S> color;                  // n x 3, logistic of M
};

/// Gradients with the same shapes as the model plus active code rows.
template <class S>
struct GradientSet {
  MatX<S> W1, W2, W3, W4;
  RowX<S> b1, b2, b3, b4;
  MatX<S> Wc1, Wc2;
  RowX<S> bc1, bc2;
  MatX<S> z_shape, z_texture;  // per member row

  template <class Fn>
  void for_each_tensor(Fn&& fn) {
    fn("W1", W1); fn("b1", b1); fn("W2", W2); fn("b2", b2);
    fn("W3", W3); fn("b3", b3); fn("W4", W4); fn("b4", b4);
    fn("Wc1", Wc1); fn("bc1", bc1); fn("Wc2", Wc2); fn("bc2", bc2);
  }

  static GradientSet zeros(const FieldModel<S>& model, int n_members);
  bool finite() const;
};

/// Loss gradients with respect to the raw network outputs.
template <class S>
struct OutputGradients {
  VecX<S> d_logit;   // dL/d(occupancy logit), n
  MatX<S> d_color;   // dL/d(color logits), n x 3
};

namespace detail {

template <class S>
void softplus_inplace(MatX<S>& pre, MatX<S>& post) {
  post = (pre.array() > S(20))
             .select(pre.array(), (pre.array().exp() + S(1)).log())
             .matrix();
}

template <class S>
void logistic_inplace(const MatX<S>& pre, MatX<S>& post) {
  post = (S(1) / (S(1) + (-pre.array()).exp())).matrix();
}

}  // namespace detail

/// Batched forward pass. `points` is n x 3 in the object's normalized cube;
/// `point_member` maps each point to its code-table row (ignored for
/// object-level models). When `record` is set the trace can be passed to
/// backward().
template <class S>
void forward_batch(const FieldModel<S>& model, const CodeTable<S>& codes,
                   const MatX<S>& points, const std::vector<int>& point_member,
                   bool record, ForwardTrace<S>& trace);

/// Exact reverse-mode gradients through the recorded forward pass. Throws
/// if the trace was not recorded.
template <class S>
GradientSet<S> backward(const FieldModel<S>& model, const CodeTable<S>& codes,
                        const ForwardTrace<S>& trace, const OutputGradients<S>& out_grads);

/// Single-point object-level forward: (occupancy, color).
std::pair<double, Vec3> forward_object(const FieldModel<double>& model, const Vec3& x);
std::pair<double, Vec3> forward_object(const FieldModel<float>& model, const Vec3& x);

/// Single-point category-level forward with explicit codes.
std::pair<double, Vec3> forward_category(const FieldModel<double>& model, const Vec3& x,
                                         const Eigen::VectorXd& z_shape,
                                         const Eigen::VectorXd& z_texture);
std::pair<double, Vec3> forward_category(const FieldModel<float>& model, const Vec3& x,
                                         const Eigen::VectorXd& z_shape,
                                         const Eigen::VectorXd& z_texture);

// ---------------------------------------------------------------------------
// implementation

template <class S>
FieldModel<S> FieldModel<S>::initialized(const ModelConfig& cfg, std::uint64_t seed) {
  FieldModel<S> m;
  m.config = cfg;
  Rng rng(seed);
  auto init = [&](MatX<S>& W, int in, int out) {
    W.resize(in, out);
    const double s = std::sqrt(6.0 / (in + out));
    for (int c = 0; c < out; ++c)
      for (int r = 0; r < in; ++r) W(r, c) = static_cast<S>(rng.uniform(-s, s));
  };
  init(m.W1, cfg.trunk_in(), cfg.hidden);
  init(m.W2, cfg.hidden, cfg.hidden);
  init(m.W3, cfg.hidden, cfg.hidden);
  init(m.W4, cfg.hidden, cfg.trunk_out());
  init(m.Wc1, cfg.head_in(), cfg.head_hidden);
  init(m.Wc2, cfg.head_hidden, 3);
  m.b1 = RowX<S>::Zero(cfg.hidden);
  m.b2 = RowX<S>::Zero(cfg.hidden);
  m.b3 = RowX<S>::Zero(cfg.hidden);
  m.b4 = RowX<S>::Zero(cfg.trunk_out());
  m.bc1 = RowX<S>::Zero(cfg.head_hidden);
  m.bc2 = RowX<S>::Zero(3);
  // zero-initialized occupancy logit: untrained fields sit at 0.5
  m.W4.col(0).setZero();
  return m;
}

template <class S>
std::size_t FieldModel<S>::parameter_count() const {
  std::size_t n = 0;
  for_each_tensor([&](const char*, const auto& t) { n += static_cast<std::size_t>(t.size()); });
  return n;
}

template <class S>
GradientSet<S> GradientSet<S>::zeros(const FieldModel<S>& model, int n_members) {
  GradientSet<S> g;
  const ModelConfig& c = model.config;
  g.W1 = MatX<S>::Zero(c.trunk_in(), c.hidden);
  g.W2 = MatX<S>::Zero(c.hidden, c.hidden);
  g.W3 = MatX<S>::Zero(c.hidden, c.hidden);
  g.W4 = MatX<S>::Zero(c.hidden, c.trunk_out());
  g.b1 = RowX<S>::Zero(c.hidden);
  g.b2 = RowX<S>::Zero(c.hidden);
  g.b3 = RowX<S>::Zero(c.hidden);
  g.b4 = RowX<S>::Zero(c.trunk_out());
  g.Wc1 = MatX<S>::Zero(c.head_in(), c.head_hidden);
  g.Wc2 = MatX<S>::Zero(c.head_hidden, 3);
  g.bc1 = RowX<S>::Zero(c.head_hidden);
  g.bc2 = RowX<S>::Zero(3);
  g.z_shape = MatX<S>::Zero(n_members, c.code_dim);
  g.z_texture = MatX<S>::Zero(n_members, c.code_dim);
  return g;
}

template <class S>
bool GradientSet<S>::finite() const {
  bool ok = true;
  const_cast<GradientSet*>(this)->for_each_tensor(
      [&](const char*, auto& t) { ok = ok && t.allFinite(); });
  return ok && z_shape.allFinite() && z_texture.allFinite();
}

template <class S>
void forward_batch(const FieldModel<S>& model, const CodeTable<S>& codes,
                   const MatX<S>& points, const std::vector<int>& point_member,
                   bool record, ForwardTrace<S>& trace) {
  const ModelConfig& cfg = model.config;
  const int n = static_cast<int>(points.rows());
  if (cfg.is_category()) {
    if (codes.z_shape.cols() != cfg.code_dim || codes.z_texture.cols() != cfg.code_dim)
      throw Error("forward_batch: code dimension mismatch");
    if (static_cast<int>(point_member.size()) != n)
      throw Error("forward_batch: missing point-to-code mapping");
  }

  trace.recorded = record;
  trace.n = n;
  trace.point_member = point_member;

  trace.X.resize(n, cfg.trunk_in());
  for (int i = 0; i < n; ++i)
    positional_encoding_into<S>(trace.X.row(i).data(), points(i, 0), points(i, 1),
                                points(i, 2), cfg.freq);
  if (cfg.is_category())
    for (int i = 0; i < n; ++i)
      trace.X.row(i).tail(cfg.code_dim) = codes.z_shape.row(point_member[i]);

  trace.Z1.noalias() = trace.X * model.W1;
  trace.Z1.rowwise() += model.b1;
  detail::softplus_inplace(trace.Z1, trace.H1);
  trace.Z2.noalias() = trace.H1 * model.W2;
  trace.Z2.rowwise() += model.b2;
  detail::softplus_inplace(trace.Z2, trace.H2);
  trace.Z3.noalias() = trace.H2 * model.W3;
  trace.Z3.rowwise() += model.b3;
  detail::softplus_inplace(trace.Z3, trace.H3);
  trace.O4.noalias() = trace.H3 * model.W4;
  trace.O4.rowwise() += model.b4;

  trace.T0.resize(n, cfg.head_in());
  trace.T0.leftCols(cfg.feature_dim) = trace.O4.rightCols(cfg.feature_dim);
  if (cfg.is_category())
    for (int i = 0; i < n; ++i)
      trace.T0.row(i).tail(cfg.code_dim) = codes.z_texture.row(point_member[i]);

  trace.G1p.noalias() = trace.T0 * model.Wc1;
  trace.G1p.rowwise() += model.bc1;
  trace.G1 = trace.G1p.cwiseMax(S(0));
  trace.M.noalias() = trace.G1 * model.Wc2;
  trace.M.rowwise() += model.bc2;

  trace.occupancy = (S(1) / (S(1) + (-trace.O4.col(0).array()).exp())).matrix();
  detail::logistic_inplace(trace.M, trace.color);
}

template <class S>
GradientSet<S> backward(const FieldModel<S>& model, const CodeTable<S>& codes,
                        const ForwardTrace<S>& trace, const OutputGradients<S>& out_grads) {
  if (!trace.recorded)
    throw Error("backward: forward pass was not recorded (detached trace)");
  const ModelConfig& cfg = model.config;
  const int n = trace.n;
  GradientSet<S> g = GradientSet<S>::zeros(model, codes.count());

  // color head
  MatX<S> dM = out_grads.d_color;
  g.Wc2.noalias() = trace.G1.transpose() * dM;
  g.bc2 = dM.colwise().sum();
  MatX<S> dG1 = dM * model.Wc2.transpose();
  dG1.array() *= (trace.G1p.array() > S(0)).template cast<S>();
  g.Wc1.noalias() = trace.T0.transpose() * dG1;
  g.bc1 = dG1.colwise().sum();
  MatX<S> dT0 = dG1 * model.Wc1.transpose();

  // trunk output: occupancy logit column + feature block from the head
  MatX<S> dO4(n, cfg.trunk_out());
  dO4.col(0) = out_grads.d_logit;
  dO4.rightCols(cfg.feature_dim) = dT0.leftCols(cfg.feature_dim);

  g.W4.noalias() = trace.H3.transpose() * dO4;
  g.b4 = dO4.colwise().sum();
  MatX<S> dH = dO4 * model.W4.transpose();
  dH.array() *= (S(1) / (S(1) + (-trace.Z3.array()).exp()));  // softplus'
  g.W3.noalias() = trace.H2.transpose() * dH;
  g.b3 = dH.colwise().sum();
  dH = dH * model.W3.transpose();
  dH.array() *= (S(1) / (S(1) + (-trace.Z2.array()).exp()));
  g.W2.noalias() = trace.H1.transpose() * dH;
  g.b2 = dH.colwise().sum();
  dH = dH * model.W2.transpose();
  dH.array() *= (S(1) / (S(1) + (-trace.Z1.array()).exp()));
  g.W1.noalias() = trace.X.transpose() * dH;
  g.b1 = dH.colwise().sum();

  if (cfg.is_category()) {
    MatX<S> dX = dH * model.W1.transpose();
    for (int i = 0; i < n; ++i) {
      const int m = trace.point_member[i];
      g.z_shape.row(m) += dX.row(i).tail(cfg.code_dim);
      g.z_texture.row(m) += dT0.row(i).tail(cfg.code_dim);
    }
  }
  return g;
}

}  // namespace objmap::field
