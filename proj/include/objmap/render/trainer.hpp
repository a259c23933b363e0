#pragma once

#include <functional>

#include "objmap/field/adam.hpp"
#include "objmap/render/losses.hpp"
#include "objmap/render/sampling.hpp"
#include "objmap/synth/observation.hpp"

namespace objmap::render {

using geom::OrientedBox;
using synth::FrameSequence;
using synth::ObjectObservation;

struct TrainConfig {
  int iterations = 2000;
  int pixels_per_iter = 120;
  int samples_per_ray = 10;
  double sigma_d = 0.03;       // depth-guided band half-width, meters
  double delta_stop = 0.02;    // occlusion stop margin, meters
  double t_near = 0.01;
  double box_inflate = 1.3;    // sampling bound around the NOCS box
  int hidden = 32;
  int code_dim = 32;           // category models only
  int freq = 4;
  field::StepConfig step;
  LossWeights loss;
  std::uint64_t seed = 0;
};

/// Per-iteration loss record sink (training log).
using LossSink = std::function<void(int iter, const LossBreakdown&)>;

/// One object to train from: its keyframes, observation, and the box that
/// anchors its normalized object space.
struct TrainTarget {
  const ObjectObservation* obs = nullptr;
  OrientedBox nocs_box;
};

struct TrainedObject {
  field::FieldModel<float> model;
  OrientedBox box;
};

struct TrainedCategory {
  field::FieldModel<float> model;
  field::CodeTable<float> codes;  // rows follow the member order passed in
};

/// Per-instance occupancy field trained by volume rendering on rays
/// sampled from the object's 2D bounding boxes.
TrainedObject train_object_model(const FrameSequence& seq, const ObjectObservation& obs,
                                 const TrainConfig& cfg, const LossSink& sink = {});

/// Shared conditioned field over the members of one (sub)category. Sampled
/// points map world -> aligned -> normalized cube through each member's
/// refined box; codes are optimized jointly with the parameters.
/// `pixels_per_iter` in the config should already account for member count.
TrainedCategory train_category_model(const FrameSequence& seq,
                                     const std::vector<int>& member_ids,
                                     const std::vector<TrainTarget>& members,
                                     const TrainConfig& cfg, const LossSink& sink = {});

/// Builds one training batch (exposed for the gradient-check oracle).
template <class S>
RayBatch<S> build_batch(const FrameSequence& seq, const std::vector<TrainTarget>& members,
                        const TrainConfig& cfg, int pixels, Rng& rng);

}  // namespace objmap::render
