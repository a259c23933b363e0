#include "objmap/regist/subcat.hpp"

#include <algorithm>

namespace objmap::regist {

namespace {

const CategoryObject* find_object(const std::vector<CategoryObject>& objects, int id) {
  for (const auto& o : objects)
    if (o.instance_id == id) return &o;
  throw Error("subcategorize: unknown representative id " + std::to_string(id));
}

RegistrationResult identity_registration(const CategoryObject& rep, const OrientedBox& box) {
  RegistrationResult r;
  r.pose = RigidPose::identity();
  r.refined_box = box;
  r.normalized_cd = 0.0;
  return r;
}

}  // namespace

SubcategoryAssignment subcategorize(const std::vector<CategoryObject>& objects,
                                    int initial_representative, const SubcatConfig& cfg) {
  SubcategoryAssignment out;
  std::vector<const CategoryObject*> pool;
  for (const auto& o : objects) pool.push_back(&o);
  std::sort(pool.begin(), pool.end(), [](const CategoryObject* a, const CategoryObject* b) {
    return a->instance_id < b->instance_id;
  });

  int rep_id = initial_representative;
  int subcat = 0;
  while (!pool.empty()) {
    const CategoryObject* rep = find_object(objects, rep_id);
    const OrientedBox rep_box = geom::fit_obb(*rep->cloud);

    out.representative_of.push_back(rep_id);
    out.subcategory_of[rep_id] = subcat;
    out.registration.emplace(rep_id, identity_registration(*rep, rep_box));

    std::vector<const CategoryObject*> leftovers;
    for (const CategoryObject* obj : pool) {
      if (obj->instance_id == rep_id) continue;
      RegistrationResult reg =
          register_to_representative(*obj->cloud, *rep->cloud, rep_box, cfg.icp);
      const bool joins = !cfg.enabled || reg.normalized_cd <= cfg.eta_sub;
      if (joins) {
        out.subcategory_of[obj->instance_id] = subcat;
        out.registration.emplace(obj->instance_id, std::move(reg));
      } else {
        leftovers.push_back(obj);
      }
    }

    pool = std::move(leftovers);
    if (pool.empty()) break;
    ++subcat;

    // re-select a representative among the leftovers
    std::vector<uncert::Candidate> candidates;
    for (const CategoryObject* obj : pool)
      candidates.push_back({obj->instance_id, obj->cloud, obj->model, obj->nocs_box});
    rep_id = uncert::select_representative(candidates, cfg.reliability, cfg.uncertainty)
                 .representative;
  }
  return out;
}

}  // namespace objmap::regist
