#pragma once

#include <map>

#include "objmap/regist/registration.hpp"
#include "objmap/uncert/representative.hpp"

namespace objmap::regist {

/// One object of a semantic category entering registration.
struct CategoryObject {
  int instance_id = 0;
  const PointCloud3* cloud = nullptr;
  const field::FieldModel<float>* model = nullptr;  // object-level, for re-selection
  OrientedBox nocs_box;                             // the model's input anchor
};

struct SubcategoryAssignment {
  std::map<int, int> subcategory_of;                 // instance -> subcategory id
  std::vector<int> representative_of;                // subcategory id -> rep instance
  std::map<int, RegistrationResult> registration;    // vs the object's own subcat rep
};

struct SubcatConfig {
  double eta_sub = 0.12;  // threshold on the normalized chamfer distance
  IcpParams icp;
  uncert::ReliabilityParams reliability;
  uncert::UncertaintyEvalConfig uncertainty;
  bool enabled = true;  // off: one subcategory per semantic category
};

/// Splits a category by shape: objects whose normalized chamfer against the
/// current representative stays within eta_sub join its subcategory; the
/// remainder re-selects a representative among itself and repeats.
SubcategoryAssignment subcategorize(const std::vector<CategoryObject>& objects,
                                    int initial_representative, const SubcatConfig& cfg);

}  // namespace objmap::regist
