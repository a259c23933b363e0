#pragma once

#include "objmap/uncert/sphere.hpp"

namespace objmap::uncert {

/// One candidate of a category: observed cloud plus its trained
/// object-level model and the box anchoring that model's input space.
struct Candidate {
  int instance_id = 0;
  const PointCloud3* cloud = nullptr;
  const field::FieldModel<float>* model = nullptr;
  OrientedBox nocs_box;
};

struct SelectionResult {
  int representative = 0;
  std::vector<std::pair<int, double>> scores;  // (instance id, reliable fraction)
};

/// Scores every candidate by the fraction of sphere rays whose reliability
/// exceeds eta_rep and returns the argmax. Ties fall to the larger observed
/// point count, then the smaller instance id.
SelectionResult select_representative(const std::vector<Candidate>& candidates,
                                      const ReliabilityParams& params,
                                      const UncertaintyEvalConfig& cfg);

}  // namespace objmap::uncert
