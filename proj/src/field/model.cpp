#include "objmap/field/model.hpp"

namespace objmap::field {

namespace {

template <class S>
std::pair<double, Vec3> forward_one(const FieldModel<S>& model, const Vec3& x,
                                    const Eigen::VectorXd* zs, const Eigen::VectorXd* zt) {
  const ModelConfig& cfg = model.config;
  CodeTable<S> codes;
  std::vector<int> member;
  if (cfg.is_category()) {
    if (!zs || !zt || zs->size() != cfg.code_dim || zt->size() != cfg.code_dim)
      throw Error("forward_category: code dimension mismatch");
    codes.owner_ids = {0};
    codes.z_shape = zs->transpose().template cast<S>();
    codes.z_texture = zt->transpose().template cast<S>();
    member = {0};
  }
  MatX<S> pts(1, 3);
  pts << static_cast<S>(x.x()), static_cast<S>(x.y()), static_cast<S>(x.z());
  ForwardTrace<S> trace;
  forward_batch(model, codes, pts, member, false, trace);
  Vec3 c(trace.color(0, 0), trace.color(0, 1), trace.color(0, 2));
  return {static_cast<double>(trace.occupancy(0)), c};
}

}  // namespace

std::pair<double, Vec3> forward_object(const FieldModel<double>& model, const Vec3& x) {
  if (model.config.is_category()) throw Error("forward_object: category model");
  return forward_one(model, x, nullptr, nullptr);
}
std::pair<double, Vec3> forward_object(const FieldModel<float>& model, const Vec3& x) {
  if (model.config.is_category()) throw Error("forward_object: category model");
  return forward_one(model, x, nullptr, nullptr);
}

std::pair<double, Vec3> forward_category(const FieldModel<double>& model, const Vec3& x,
                                         const Eigen::VectorXd& z_shape,
                                         const Eigen::VectorXd& z_texture) {
  if (!model.config.is_category()) throw Error("forward_category: object-level model");
  return forward_one(model, x, &z_shape, &z_texture);
}
std::pair<double, Vec3> forward_category(const FieldModel<float>& model, const Vec3& x,
                                         const Eigen::VectorXd& z_shape,
                                         const Eigen::VectorXd& z_texture) {
  if (!model.config.is_category()) throw Error("forward_category: object-level model");
  return forward_one(model, x, &z_shape, &z_texture);
}

}  // namespace objmap::field
