#include "objmap/uncert/representative.hpp"

namespace objmap::uncert {

SelectionResult select_representative(const std::vector<Candidate>& candidates,
                                      const ReliabilityParams& params,
                                      const UncertaintyEvalConfig& cfg) {
  if (candidates.empty())
    throw Error("select_representative: no candidates with trained models");
  if (!params.valid()) throw ConfigError("select_representative: invalid parameters");

  SelectionResult result;
  int best = -1;
  double best_score = -1.0;
  std::size_t best_count = 0;
  for (const Candidate& cand : candidates) {
    SphereRayBundle bundle = cast_sphere_rays(*cand.cloud, cfg.n_dirs);
    evaluate_bundle(bundle, *cand.model, cand.nocs_box, params, cfg);
    const double score = reliable_fraction(bundle, params.eta_rep);
    result.scores.emplace_back(cand.instance_id, score);
    const std::size_t count = cand.cloud->count();
    const bool wins = score > best_score ||
                      (score == best_score &&
                       (count > best_count ||
                        (count == best_count && cand.instance_id < best)));
    if (best < 0 || wins) {
      best = cand.instance_id;
      best_score = score;
      best_count = count;
    }
  }
  result.representative = best;
  return result;
}

}  // namespace objmap::uncert
