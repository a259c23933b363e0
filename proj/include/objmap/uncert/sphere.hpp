#pragma once

#include <string>
#include <vector>

#include "objmap/field/model.hpp"
#include "objmap/geom/obb.hpp"
#include "objmap/uncert/reliability.hpp"

namespace objmap::uncert {

using geom::OrientedBox;
using geom::PointCloud3;

struct SphereRay {
  Vec3 origin = Vec3::Zero();
  Vec3 direction = Vec3::Zero();  // unit, toward the antipodal point
  double u = 0.0;
  double g = 0.0;
};

struct SphereRayBundle {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
  std::vector<SphereRay> rays;
};

/// Rays from a Fibonacci-spiral point set on a sphere of radius 1.2x the
/// cloud's largest dimension, each aimed at its antipode. Origins are laid
/// out in the cloud's principal frame, so the bundle co-rotates with the
/// object.
SphereRayBundle cast_sphere_rays(const PointCloud3& cloud, int n_dirs);

struct UncertaintyEvalConfig {
  int n_dirs = 512;
  int samples_per_ray = 32;
  double box_inflate = 1.3;  // match the training-time sampling bound
};

/// Fills u and g for every ray of the bundle by sampling the trained
/// object-level field along the chord clipped to the object's inflated
/// box. Rays that miss the box carry zero weight mass (u = 0).
void evaluate_bundle(SphereRayBundle& bundle, const field::FieldModel<float>& model,
                     const OrientedBox& nocs_box, const ReliabilityParams& params,
                     const UncertaintyEvalConfig& cfg);

/// Fraction of rays with g above the representative threshold.
double reliable_fraction(const SphereRayBundle& bundle, double eta_rep);

/// CSV rows: ray index, origin xyz, u, g.
void write_uncertainty_csv(const SphereRayBundle& bundle, const std::string& path);

}  // namespace objmap::uncert
