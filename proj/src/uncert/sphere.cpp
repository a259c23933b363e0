#include "objmap/uncert/sphere.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "objmap/render/volume.hpp"

namespace objmap::uncert {

SphereRayBundle cast_sphere_rays(const PointCloud3& cloud, int n_dirs) {
  if (cloud.count() < 2)
    throw DegenerateCloudError("cast_sphere_rays: need at least 2 points");
  SphereRayBundle bundle;
  bundle.center = cloud.centroid();
  bundle.radius = 1.2 * cloud.largest_dimension();
  if (bundle.radius <= 0.0)
    throw DegenerateCloudError("cast_sphere_rays: degenerate cloud");

  // principal frame so the bundle is equivariant under rigid motion
  Mat3 frame = Mat3::Identity();
  if (cloud.count() >= 4) {
    try {
      frame = geom::fit_obb(cloud).axes;
    } catch (const DegenerateCloudError&) {
      frame = Mat3::Identity();
    }
  }

  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  bundle.rays.reserve(n_dirs);
  for (int i = 0; i < n_dirs; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n_dirs;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    const Vec3 local(r * std::cos(phi), r * std::sin(phi), z);
    SphereRay ray;
    ray.origin = bundle.center + bundle.radius * (frame * local);
    ray.direction = (bundle.center - ray.origin).normalized();
    bundle.rays.push_back(ray);
  }
  return bundle;
}

void evaluate_bundle(SphereRayBundle& bundle, const field::FieldModel<float>& model,
                     const OrientedBox& nocs_box, const ReliabilityParams& params,
                     const UncertaintyEvalConfig& cfg) {
  const OrientedBox bounds = nocs_box.inflated(cfg.box_inflate);
  const int ns = cfg.samples_per_ray;
  const double g_empty = reliability(0.0, params);

  // gather the sample points of every ray that crosses the bounds
  std::vector<int> ray_of_block;
  std::vector<double> t0s, dts;
  field::MatX<float> points;
  std::vector<std::array<double, 2>> spans(bundle.rays.size(), {0, 0});
  int n_active = 0;
  for (std::size_t r = 0; r < bundle.rays.size(); ++r) {
    double t0, t1;
    if (geom::intersect_ray_box(bundle.rays[r].origin, bundle.rays[r].direction, bounds, t0,
                                t1) &&
        t1 > std::max(t0, 0.0)) {
      spans[r] = {std::max(t0, 0.0), t1};
      ++n_active;
    } else {
      spans[r] = {1.0, -1.0};
    }
  }
  points.resize(n_active * ns, 3);
  ray_of_block.reserve(n_active);
  int block = 0;
  for (std::size_t r = 0; r < bundle.rays.size(); ++r) {
    if (spans[r][1] <= spans[r][0]) continue;
    const double t0 = spans[r][0], dt = (spans[r][1] - spans[r][0]) / ns;
    for (int i = 0; i < ns; ++i) {
      const double t = t0 + dt * (i + 0.5);  // deterministic midpoints
      const Vec3 p = geom::world_to_nocs(
          bundle.rays[r].origin + t * bundle.rays[r].direction, nocs_box);
      points(block * ns + i, 0) = static_cast<float>(p.x());
      points(block * ns + i, 1) = static_cast<float>(p.y());
      points(block * ns + i, 2) = static_cast<float>(p.z());
    }
    ray_of_block.push_back(static_cast<int>(r));
    ++block;
  }

  field::CodeTable<float> codes;
  field::ForwardTrace<float> trace;
  if (n_active > 0)
    field::forward_batch(model, codes, points, {}, false, trace);

  for (auto& ray : bundle.rays) {
    ray.u = 0.0;
    ray.g = g_empty;
  }
  std::vector<double> occ(ns), w(ns);
  for (int b = 0; b < n_active; ++b) {
    for (int i = 0; i < ns; ++i) occ[i] = static_cast<double>(trace.occupancy[b * ns + i]);
    render::compute_weights(occ.data(), ns, w.data());
    SphereRay& ray = bundle.rays[ray_of_block[b]];
    ray.u = ray_uncertainty({w.data(), w.size()}, params.alpha_u);
    ray.g = reliability(ray.u, params);
  }
}

double reliable_fraction(const SphereRayBundle& bundle, double eta_rep) {
  if (bundle.rays.empty()) return 0.0;
  std::size_t n = 0;
  for (const auto& ray : bundle.rays)
    if (ray.g > eta_rep) ++n;
  return static_cast<double>(n) / static_cast<double>(bundle.rays.size());
}

void write_uncertainty_csv(const SphereRayBundle& bundle, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path);
  f << "ray,origin_x,origin_y,origin_z,u,g\n";
  char buf[200];
  for (std::size_t i = 0; i < bundle.rays.size(); ++i) {
    const SphereRay& r = bundle.rays[i];
    std::snprintf(buf, sizeof(buf), "%zu,%.9g,%.9g,%.9g,%.9g,%.9g\n", i, r.origin.x(),
                  r.origin.y(), r.origin.z(), r.u, r.g);
    f << buf;
  }
}

}  // namespace objmap::uncert
