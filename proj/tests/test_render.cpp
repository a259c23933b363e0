#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "objmap/field/model.hpp"
#include "objmap/render/losses.hpp"
#include "objmap/render/sampling.hpp"
#include "objmap/render/volume.hpp"

using namespace objmap;
using namespace objmap::render;

namespace {

// Full loss as a pure function of (model, codes) on a frozen batch; the
// independent side of the finite-difference oracle.
double loss_value(const field::FieldModel<double>& model, const field::CodeTable<double>& codes,
                  const RayBatch<double>& batch, const LossWeights& w) {
  field::ForwardTrace<double> trace;
  field::forward_batch(model, codes, batch.points, batch.point_member, false, trace);
  return compute_losses(batch, trace, codes, w, false).values.total;
}

RayBatch<double> gradcheck_batch(int n_rays, int n_samples, int n_members, Rng& rng) {
  RayBatch<double> b;
  b.n_rays = n_rays;
  b.n_samples = n_samples;
  const int n = n_rays * n_samples;
  b.points.resize(n, 3);
  b.sample_depth.resize(n);
  b.target_depth.resize(n_rays);
  b.target_color.resize(n_rays, 3);
  b.mask.resize(n_rays);
  b.point_member.resize(n);
  b.ray_member.resize(n_rays);
  for (int r = 0; r < n_rays; ++r) {
    double depth = 0.3;
    for (int i = 0; i < n_samples; ++i) {
      const int row = r * n_samples + i;
      for (int c = 0; c < 3; ++c) b.points(row, c) = rng.uniform(-1, 1);
      depth += rng.uniform(0.02, 0.15);
      b.sample_depth[row] = depth;
      b.point_member[row] = r % n_members;
    }
    b.ray_member[r] = r % n_members;
    b.mask[r] = (r % 3 == 0) ? 0.0 : 1.0;
    b.target_depth[r] = (r % 5 == 4) ? 0.0 : rng.uniform(0.4, 1.8);
    for (int c = 0; c < 3; ++c) b.target_color(r, c) = rng.uniform();
  }
  return b;
}

}  // namespace

TEST_CASE("compute_weights closed forms and sum identity") {
  std::vector<double> w = compute_weights({1.0});
  CHECK(w[0] == 1.0);

  w = compute_weights({0.5, 0.5});
  CHECK(w[0] == 0.5);
  CHECK(w[1] == 0.25);
  CHECK(w[0] + w[1] == doctest::Approx(0.75));

  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> o(10);
    for (double& v : o) v = rng.uniform();
    std::vector<double> ws = compute_weights(o);
    double sum = 0.0, prod = 1.0;
    for (int i = 0; i < 10; ++i) {
      sum += ws[i];
      prod *= (1.0 - o[i]);
      CHECK(ws[i] >= 0.0);
      CHECK(ws[i] <= 1.0);
    }
    CHECK(std::abs(sum - (1.0 - prod)) < 1e-12);
    CHECK(sum <= 1.0 + 1e-12);
  }
}

TEST_CASE("weights_backward matches finite differences") {
  Rng rng(11);
  const int n = 12;
  std::vector<double> o(n), g(n), analytic(n);
  for (int i = 0; i < n; ++i) {
    o[i] = rng.uniform(0.05, 0.95);
    g[i] = rng.uniform(-1, 1);
  }
  weights_backward(o.data(), g.data(), n, analytic.data());

  auto scalar = [&](const std::vector<double>& occ) {
    std::vector<double> w(n);
    compute_weights(occ.data(), n, w.data());
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += g[i] * w[i];
    return s;
  };
  const double h = 1e-6;
  for (int i = 0; i < n; ++i) {
    std::vector<double> lo = o, hi = o;
    lo[i] -= h;
    hi[i] += h;
    const double fd = (scalar(hi) - scalar(lo)) / (2 * h);
    CHECK(analytic[i] == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("render_ray weighted sums") {
  WeightProfile p = make_profile({1.0}, {2.0}, {RGB(1, 0, 0)});
  RenderedRay r = render_ray(p);
  CHECK(r.color == RGB(1, 0, 0));
  CHECK(r.depth == 2.0);
  CHECK(r.opacity == 1.0);

  p = make_profile({1e-9, 1e-9, 1e-9}, {1, 2, 3}, {RGB(1, 1, 1), RGB(1, 1, 1), RGB(1, 1, 1)});
  r = render_ray(p);
  CHECK(r.opacity < 1e-8);
  CHECK(r.depth < 1e-7);

  p = make_profile({0.5, 0.5}, {1.0, 2.0}, {RGB(1, 0, 0), RGB(0, 1, 0)});
  r = render_ray(p);
  CHECK(r.color.x() == doctest::Approx(0.5));
  CHECK(r.color.y() == doctest::Approx(0.25));
  CHECK(r.color.z() == 0.0);
  CHECK(r.depth == doctest::Approx(1.0));
  CHECK(r.opacity == doctest::Approx(0.75));
}

TEST_CASE("render_ray is linear in colors for fixed weights") {
  Rng rng(3);
  std::vector<double> occ(8), depths(8);
  std::vector<RGB> ca(8), cb(8), csum(8);
  double d = 0.1;
  for (int i = 0; i < 8; ++i) {
    occ[i] = rng.uniform(0.05, 0.9);
    d += rng.uniform(0.05, 0.2);
    depths[i] = d;
    ca[i] = RGB(rng.uniform(), rng.uniform(), rng.uniform());
    cb[i] = RGB(rng.uniform(), rng.uniform(), rng.uniform());
    csum[i] = 0.3 * ca[i] + 0.7 * cb[i];
  }
  RenderedRay ra = render_ray(make_profile(occ, depths, ca));
  RenderedRay rb = render_ray(make_profile(occ, depths, cb));
  RenderedRay rs = render_ray(make_profile(occ, depths, csum));
  CHECK((rs.color - (0.3 * ra.color + 0.7 * rb.color)).norm() < 1e-12);
}

TEST_CASE("depth-guided sampling intervals") {
  Rng rng(5);
  Ray ray;
  SUBCASE("valid depth splits front and band") {
    for (int trial = 0; trial < 20; ++trial) {
      auto s = sample_depth_guided(ray, 2.0, 0.01, 10.0, 10, 0.03, rng);
      REQUIRE(s.depths.size() == 10);
      for (int i = 0; i < 5; ++i) CHECK(s.depths[i] < 1.91);
      for (int i = 5; i < 10; ++i) {
        CHECK(s.depths[i] >= 1.97);
        CHECK(s.depths[i] <= 2.03);
      }
      for (int i = 1; i < 10; ++i) REQUIRE(s.depths[i] > s.depths[i - 1]);
    }
  }
  SUBCASE("no depth: one sample per stratified bin") {
    auto s = sample_depth_guided(ray, std::nullopt, 0.0, 1.0, 10, 0.03, rng);
    for (int i = 0; i < 10; ++i) {
      CHECK(s.depths[i] >= i * 0.1);
      CHECK(s.depths[i] <= (i + 1) * 0.1);
    }
  }
  SUBCASE("occlusion truncation dominates the observed surface") {
    for (int trial = 0; trial < 20; ++trial) {
      auto s = sample_depth_guided(ray, 2.0, 0.01, 1.02, 10, 0.03, rng);
      for (double d : s.depths) CHECK(d <= 1.02);
    }
  }
  SUBCASE("empty range is an error") {
    CHECK_THROWS_AS(sample_depth_guided(ray, 1.0, 2.0, 2.0, 10, 0.03, rng), Error);
  }
}

TEST_CASE("loss values: perfect fit, off-mask opacity, regularizer arithmetic") {
  // hand-built trace: 2 samples per ray, opaque first sample
  field::CodeTable<double> codes = field::CodeTable<double>::zeros({0}, 32);
  codes.z_shape.row(0).setConstant(1.0 / std::sqrt(32.0));   // unit vector
  codes.z_texture.row(0).setConstant(1.0 / std::sqrt(32.0)); // unit vector

  RayBatch<double> batch;
  batch.n_rays = 2;
  batch.n_samples = 2;
  batch.points = field::MatX<double>::Zero(4, 3);
  batch.sample_depth.resize(4);
  batch.sample_depth << 1.0, 1.5, 1.0, 1.5;
  batch.target_depth.resize(2);
  batch.target_depth << 1.0, 0.0;
  batch.target_color.resize(2, 3);
  batch.target_color << 0.25, 0.5, 0.75, 0.0, 0.0, 0.0;
  batch.mask.resize(2);
  batch.mask << 1.0, 0.0;  // second ray is off-mask
  batch.point_member = {0, 0, 0, 0};
  batch.ray_member = {0, 0};

  field::ForwardTrace<double> trace;
  trace.recorded = false;
  trace.n = 4;
  trace.occupancy.resize(4);
  trace.occupancy << 1.0, 0.5, 0.4, 1e-12;  // ray 1 opaque at d=1; ray 2 opacity 0.4
  trace.color.resize(4, 3);
  trace.color << 0.25, 0.5, 0.75, 0.1, 0.1, 0.1, 0.9, 0.9, 0.9, 0.5, 0.5, 0.5;

  LossWeights w;  // lambda1 = 5, lambda2 = 10, lambda3 = 0.0005
  auto node = compute_losses(batch, trace, codes, w, false);
  // ray 1: perfect depth, perfect color, opacity |1 - 1| = 0
  // ray 2: off-mask, no depth/color terms, opacity |0.4 - 0|
  CHECK(node.values.depth == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(node.values.color == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(node.values.opacity == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(node.values.reg == doctest::Approx(2.0));
  CHECK(node.values.total ==
        doctest::Approx(10.0 * 0.4 + 0.0005 * 2.0).epsilon(1e-9));

  // invariant: total recombines from the per-object terms
  double recombined = 0.0;
  for (const auto& [k, t] : node.values.per_object)
    recombined += t.depth + w.lambda_color * t.color + w.lambda_opacity * t.opacity +
                  w.lambda_reg * t.reg;
  CHECK(node.values.total == doctest::Approx(recombined).epsilon(1e-12));
}

TEST_CASE("rays outside every mask contribute only opacity loss") {
  field::FieldModel<double> model =
      field::FieldModel<double>::initialized(field::ModelConfig{}, 3);
  field::CodeTable<double> codes;
  Rng rng(19);
  RayBatch<double> batch = gradcheck_batch(6, 5, 1, rng);
  batch.point_member.clear();
  batch.ray_member.clear();
  batch.mask.setZero();
  field::ForwardTrace<double> trace;
  field::forward_batch(model, codes, batch.points, batch.point_member, false, trace);
  auto node = compute_losses(batch, trace, codes, LossWeights{}, false);
  CHECK(node.values.depth == 0.0);
  CHECK(node.values.color == 0.0);
  CHECK(node.values.opacity > 0.0);
}

TEST_CASE("analytic gradients match central finite differences") {
  field::ModelConfig cfg;
  cfg.code_dim = 32;
  field::FieldModel<double> model = field::FieldModel<double>::initialized(cfg, 101);
  model.W4.col(0).setRandom();  // make the occupancy pathway non-degenerate
  field::CodeTable<double> codes = field::CodeTable<double>::zeros({0, 1}, 32);
  Rng rng(23);
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 32; ++j) {
      codes.z_shape(k, j) = 0.3 * rng.normal();
      codes.z_texture(k, j) = 0.3 * rng.normal();
    }
  RayBatch<double> batch = gradcheck_batch(16, 10, 2, rng);
  const LossWeights w;

  field::ForwardTrace<double> trace;
  field::forward_batch(model, codes, batch.points, batch.point_member, true, trace);
  auto node = compute_losses(batch, trace, codes, w, true);
  auto grads = render::backward(model, codes, trace, node);

  const double h = 1e-4;
  // ten parameters spread over every tensor type
  struct Slot {
    const char* tensor;
    int index;
  };
  const Slot slots[10] = {{"W1", 5},  {"b1", 3},  {"W2", 40}, {"W3", 17}, {"b3", 9},
                          {"W4", 12}, {"Wc1", 8}, {"bc1", 2}, {"Wc2", 31}, {"bc2", 1}};
  for (const Slot& slot : slots) {
    double analytic = 0.0;
    grads.for_each_tensor([&](const char* name, auto& t) {
      if (std::string(name) == slot.tensor) analytic = t.data()[slot.index];
    });
    field::FieldModel<double> lo = model, hi = model;
    lo.for_each_tensor([&](const char* name, auto& t) {
      if (std::string(name) == slot.tensor)
        t.data()[slot.index] -= h;
    });
    hi.for_each_tensor([&](const char* name, auto& t) {
      if (std::string(name) == slot.tensor)
        t.data()[slot.index] += h;
    });
    const double fd =
        (loss_value(hi, codes, batch, w) - loss_value(lo, codes, batch, w)) / (2 * h);
    const double denom = std::max({std::abs(fd), std::abs(analytic), 1e-8});
    CHECK(std::abs(analytic - fd) / denom < 1e-4);
  }

  // both latent codes, a few coordinates each
  for (int k = 0; k < 2; ++k) {
    for (int j : {0, 7, 19, 31}) {
      for (int which = 0; which < 2; ++which) {
        auto& mat = which == 0 ? codes.z_shape : codes.z_texture;
        const double analytic =
            which == 0 ? grads.z_shape(k, j) : grads.z_texture(k, j);
        const double saved = mat(k, j);
        mat(k, j) = saved + h;
        const double up = loss_value(model, codes, batch, w);
        mat(k, j) = saved - h;
        const double dn = loss_value(model, codes, batch, w);
        mat(k, j) = saved;
        const double fd = (up - dn) / (2 * h);
        const double denom = std::max({std::abs(fd), std::abs(analytic), 1e-8});
        CHECK(std::abs(analytic - fd) / denom < 1e-4);
      }
    }
  }
}
