#include "objmap/render/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "objmap/geom/obb.hpp"

namespace objmap::render {

namespace {

// Stable enumeration of the pooled bbox pixels: members in the order given
// (callers sort by instance id), keyframes in frame order, pixels row-major.
struct PixelPool {
  struct Entry {
    int member;
    std::size_t keyframe;  // index into obs->keyframes
    std::uint64_t first;   // cumulative pixel offset
  };
  std::vector<Entry> entries;
  std::uint64_t total = 0;

  explicit PixelPool(const std::vector<TrainTarget>& members) {
    for (std::size_t m = 0; m < members.size(); ++m) {
      const auto& kfs = members[m].obs->keyframes;
      for (std::size_t k = 0; k < kfs.size(); ++k) {
        entries.push_back({static_cast<int>(m), k, total});
        total += static_cast<std::uint64_t>(kfs[k].bbox.pixel_count());
      }
    }
    if (total == 0) throw Error("training: no observed pixels");
  }

  void locate(std::uint64_t index, int& member, std::size_t& keyframe,
              std::uint64_t& pixel) const {
    auto it = std::upper_bound(entries.begin(), entries.end(), index,
                               [](std::uint64_t v, const Entry& e) { return v < e.first; });
    const Entry& e = *(it - 1);
    member = e.member;
    keyframe = e.keyframe;
    pixel = index - e.first;
  }
};

}  // namespace

template <class S>
RayBatch<S> build_batch(const FrameSequence& seq, const std::vector<TrainTarget>& members,
                        const TrainConfig& cfg, int pixels, Rng& rng) {
  const PixelPool pool(members);
  const int ns = cfg.samples_per_ray;
  const bool category = cfg.code_dim > 0 && members.size() >= 1;

  RayBatch<S> batch;
  batch.n_rays = pixels;
  batch.n_samples = ns;
  batch.points.resize(pixels * ns, 3);
  batch.sample_depth.resize(pixels * ns);
  batch.target_depth.resize(pixels);
  batch.target_color.resize(pixels, 3);
  batch.mask.resize(pixels);
  if (category) {
    batch.point_member.resize(pixels * ns);
    batch.ray_member.resize(pixels);
  }

  int filled = 0;
  long attempts = 0;
  const long max_attempts = 200L * pixels;
  while (filled < pixels) {
    if (++attempts > max_attempts)
      throw Error("training: could not assemble a ray batch (rays keep missing the bounds)");
    int m;
    std::size_t kf_idx;
    std::uint64_t pix;
    pool.locate(rng.uniform_index(pool.total), m, kf_idx, pix);
    const TrainTarget& target = members[m];
    const auto& kf = target.obs->keyframes[kf_idx];
    const synth::Frame& frame = seq.frames[kf.frame_index];
    const int x = kf.bbox.x0 + static_cast<int>(pix % kf.bbox.width());
    const int y = kf.bbox.y0 + static_cast<int>(pix / kf.bbox.width());

    Ray ray;
    ray.origin = frame.camera.translation;
    ray.march = synth::pixel_march(frame.intrinsics, frame.camera, x, y);

    const geom::OrientedBox bounds = target.nocs_box.inflated(cfg.box_inflate);
    double t0, t1;
    if (!geom::intersect_ray_box(ray.origin, ray.march, bounds, t0, t1)) continue;
    const double t_lo = std::max(cfg.t_near, t0);
    double t_hi = t1;
    t_hi = std::min(t_hi, synth::occlusion_truncate(frame, x, y, target.obs->instance_id,
                                                    cfg.delta_stop, t_hi));
    if (t_hi <= t_lo) continue;

    const bool on_mask = frame.instance_mask.at(x, y) == target.obs->instance_id;
    const float depth_px = frame.depth.at(x, y);
    std::optional<double> observed;
    if (on_mask && depth_px > 0.0f) observed = static_cast<double>(depth_px);

    const RaySampleSet samples =
        sample_depth_guided(ray, observed, t_lo, t_hi, ns, cfg.sigma_d, rng);

    const int row0 = filled * ns;
    for (int i = 0; i < ns; ++i) {
      const Vec3 p = geom::world_to_nocs(ray.at(samples.depths[i]), target.nocs_box);
      batch.points(row0 + i, 0) = static_cast<S>(p.x());
      batch.points(row0 + i, 1) = static_cast<S>(p.y());
      batch.points(row0 + i, 2) = static_cast<S>(p.z());
      batch.sample_depth[row0 + i] = static_cast<S>(samples.depths[i]);
      if (category) batch.point_member[row0 + i] = m;
    }
    batch.target_depth[filled] = observed ? static_cast<S>(*observed) : S(0);
    const RGB c = frame.rgb_at(x, y);
    batch.target_color(filled, 0) = static_cast<S>(c.x());
    batch.target_color(filled, 1) = static_cast<S>(c.y());
    batch.target_color(filled, 2) = static_cast<S>(c.z());
    batch.mask[filled] = on_mask ? S(1) : S(0);
    if (category) batch.ray_member[filled] = m;
    ++filled;
  }
  return batch;
}

template RayBatch<float> build_batch<float>(const FrameSequence&, const std::vector<TrainTarget>&,
                                            const TrainConfig&, int, Rng&);
template RayBatch<double> build_batch<double>(const FrameSequence&,
                                              const std::vector<TrainTarget>&,
                                              const TrainConfig&, int, Rng&);

namespace {

template <class S>
void train_loop(const FrameSequence& seq, const std::vector<TrainTarget>& members,
                field::FieldModel<S>& model, field::CodeTable<S>& codes,
                const TrainConfig& cfg, int pixels_per_iter, const LossSink& sink) {
  Rng rng(cfg.seed);
  auto adam = field::AdamState<S>::zeros(model, codes.count());
  field::ForwardTrace<S> trace;
  for (int iter = 0; iter < cfg.iterations; ++iter) {
    RayBatch<S> batch = build_batch<S>(seq, members, cfg, pixels_per_iter, rng);
    field::forward_batch(model, codes, batch.points, batch.point_member, true, trace);
    LossNode<S> node = compute_losses(batch, trace, codes, cfg.loss, true);
    if (!std::isfinite(node.values.total))
      throw DivergenceError("training diverged at iteration " + std::to_string(iter));
    field::GradientSet<S> grads = backward(model, codes, trace, node);
    field::optimizer_step(model, codes, grads, adam, cfg.step);
    if (sink) sink(iter, node.values);
  }
}

}  // namespace

TrainedObject train_object_model(const FrameSequence& seq, const ObjectObservation& obs,
                                 const TrainConfig& cfg, const LossSink& sink) {
  if (obs.cloud.empty() || obs.keyframes.empty())
    throw Error("train_object_model: empty observation");

  TrainedObject out;
  out.box = geom::fit_obb(obs.cloud);

  field::ModelConfig arch;
  arch.hidden = cfg.hidden;
  arch.code_dim = 0;
  arch.freq = cfg.freq;
  out.model = field::FieldModel<float>::initialized(arch, derive_seed(cfg.seed, "init"));

  field::CodeTable<float> codes;
  std::vector<TrainTarget> members{{&obs, out.box}};
  train_loop(seq, members, out.model, codes, cfg, cfg.pixels_per_iter, sink);
  return out;
}

TrainedCategory train_category_model(const FrameSequence& seq,
                                     const std::vector<int>& member_ids,
                                     const std::vector<TrainTarget>& members,
                                     const TrainConfig& cfg, const LossSink& sink) {
  if (members.empty()) throw Error("train_category_model: category has no objects");
  if (member_ids.size() != members.size())
    throw Error("train_category_model: id/member mismatch");

  // sort by instance id so batching is independent of the input order
  std::vector<std::size_t> order(members.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return member_ids[a] < member_ids[b]; });
  std::vector<TrainTarget> sorted;
  std::vector<int> sorted_ids;
  for (std::size_t i : order) {
    sorted.push_back(members[i]);
    sorted_ids.push_back(member_ids[i]);
  }

  TrainedCategory out;
  field::ModelConfig arch;
  arch.hidden = cfg.hidden;
  arch.code_dim = cfg.code_dim;
  arch.freq = cfg.freq;
  out.model = field::FieldModel<float>::initialized(arch, derive_seed(cfg.seed, "init"));
  out.codes = field::CodeTable<float>::zeros(sorted_ids, cfg.code_dim);

  train_loop(seq, sorted, out.model, out.codes, cfg, cfg.pixels_per_iter, sink);
  return out;
}

}  // namespace objmap::render
