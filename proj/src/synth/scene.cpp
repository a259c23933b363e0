#include "objmap/synth/scene.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "objmap/core/rng.hpp"

namespace objmap::synth {

namespace {

struct LocalBox {
  Vec3 center;
  Vec3 half;
};

// Chair decomposition in the local frame (feet on z=0, facing +x).
std::vector<LocalBox> chair_boxes(const ChairParams& c) {
  std::vector<LocalBox> parts;
  const double L = c.leg_length, st = c.seat_half.z();
  parts.push_back({{0, 0, L + st}, c.seat_half});  // seat
  if (c.back_height > 0.0) {
    parts.push_back({{-c.seat_half.x() + c.back_thickness, 0, L + 2 * st + c.back_height / 2},
                     {c.back_thickness, c.seat_half.y(), c.back_height / 2}});
  }
  const double lt = c.leg_thickness;
  for (int sx : {-1, 1})
    for (int sy : {-1, 1})
      parts.push_back({{sx * (c.seat_half.x() - lt), sy * (c.seat_half.y() - lt), L / 2},
                       {lt, lt, L / 2}});
  return parts;
}

std::vector<LocalBox> primitive_boxes(const ScenePrimitive& prim) {
  switch (prim.kind) {
    case PrimitiveKind::Box:
      return {{{0, 0, prim.box_half.z()}, prim.box_half}};
    case PrimitiveKind::Chair:
      return chair_boxes(prim.chair);
    default:
      return {};
  }
}

void append_box_mesh(TriangleMesh& mesh, const LocalBox& b) {
  const Vec3 c = b.center, h = b.half;
  const auto base = static_cast<std::uint32_t>(mesh.vertices.size());
  for (int i = 0; i < 8; ++i) {
    mesh.vertices.emplace_back(c.x() + ((i & 1) ? h.x() : -h.x()),
                               c.y() + ((i & 2) ? h.y() : -h.y()),
                               c.z() + ((i & 4) ? h.z() : -h.z()));
  }
  static const int faces[6][4] = {{0, 2, 6, 4}, {1, 5, 7, 3}, {0, 4, 5, 1},
                                  {2, 3, 7, 6}, {0, 1, 3, 2}, {4, 6, 7, 5}};
  for (const auto& f : faces) {
    mesh.triangles.push_back({base + f[0], base + f[1], base + f[2]});
    mesh.triangles.push_back({base + f[0], base + f[2], base + f[3]});
  }
}

bool intersect_local_aabb(const Vec3& o, const Vec3& d, const Vec3& lo, const Vec3& hi,
                          double t_min, double& t_hit, Vec3& n_local) {
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  int enter_axis = -1;
  double enter_sign = 0.0;
  for (int k = 0; k < 3; ++k) {
    if (std::abs(d[k]) < 1e-15) {
      if (o[k] < lo[k] || o[k] > hi[k]) return false;
      continue;
    }
    double ta = (lo[k] - o[k]) / d[k];
    double tb = (hi[k] - o[k]) / d[k];
    double sign = -1.0;
    if (ta > tb) {
      std::swap(ta, tb);
      sign = 1.0;
    }
    if (ta > t0) {
      t0 = ta;
      enter_axis = k;
      enter_sign = sign;
    }
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  if (t1 < t_min) return false;
  if (t0 >= t_min) {
    t_hit = t0;
    n_local = Vec3::Zero();
    if (enter_axis >= 0) n_local[enter_axis] = enter_sign;
    return true;
  }
  return false;  // origin inside the box; not relevant for exterior cameras
}

bool intersect_local_cylinder(const Vec3& o, const Vec3& d, double r, double h,
                              double t_min, double& t_hit, Vec3& n_local) {
  double best = std::numeric_limits<double>::infinity();
  Vec3 best_n = Vec3::Zero();

  // side
  const double a = d.x() * d.x() + d.y() * d.y();
  if (a > 1e-15) {
    const double b = 2.0 * (o.x() * d.x() + o.y() * d.y());
    const double c = o.x() * o.x() + o.y() * o.y() - r * r;
    const double disc = b * b - 4 * a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      for (double t : {(-b - sq) / (2 * a), (-b + sq) / (2 * a)}) {
        if (t < t_min || t >= best) continue;
        const double z = o.z() + t * d.z();
        if (z < 0.0 || z > h) continue;
        best = t;
        best_n = Vec3(o.x() + t * d.x(), o.y() + t * d.y(), 0).normalized();
      }
    }
  }
  // caps
  if (std::abs(d.z()) > 1e-15) {
    for (double zc : {0.0, h}) {
      const double t = (zc - o.z()) / d.z();
      if (t < t_min || t >= best) continue;
      const double x = o.x() + t * d.x(), y = o.y() + t * d.y();
      if (x * x + y * y > r * r) continue;
      best = t;
      best_n = Vec3(0, 0, zc == 0.0 ? -1.0 : 1.0);
    }
  }
  if (!std::isfinite(best)) return false;
  t_hit = best;
  n_local = best_n;
  return true;
}

void append_cylinder_mesh(TriangleMesh& mesh, double r, double h, int segments = 64) {
  const auto base = static_cast<std::uint32_t>(mesh.vertices.size());
  for (int i = 0; i < segments; ++i) {
    const double a = 2.0 * M_PI * i / segments;
    mesh.vertices.emplace_back(r * std::cos(a), r * std::sin(a), 0.0);
    mesh.vertices.emplace_back(r * std::cos(a), r * std::sin(a), h);
  }
  const std::uint32_t c0 = static_cast<std::uint32_t>(mesh.vertices.size());
  mesh.vertices.emplace_back(0, 0, 0);
  const std::uint32_t c1 = c0 + 1;
  mesh.vertices.emplace_back(0, 0, h);
  for (int i = 0; i < segments; ++i) {
    const std::uint32_t j = (i + 1) % segments;
    const std::uint32_t bi = base + 2 * i, bj = base + 2 * j;
    mesh.triangles.push_back({bi, bj, bi + 1});
    mesh.triangles.push_back({bj, bj + 1, bi + 1});
    mesh.triangles.push_back({c0, bj, bi});
    mesh.triangles.push_back({c1, bi + 1, bj + 1});
  }
}

}  // namespace

const ScenePrimitive* Scene::find(int instance_id) const {
  for (const auto& o : desc.objects)
    if (o.instance_id == instance_id) return &o;
  return nullptr;
}

std::uint16_t Scene::class_id(const std::string& name) const {
  auto it = class_ids.find(name);
  return it == class_ids.end() ? 0 : it->second;
}

Scene build_scene(const SceneDescription& input) {
  Scene scene;
  scene.desc = input;
  auto& desc = scene.desc;

  if (desc.random_room) {
    const RandomRoomSpec& rr = *desc.random_room;
    if (rr.count > 0 && rr.classes.empty())
      throw ConfigError("random_room needs at least one class");
    Rng rng(derive_seed(desc.seed, "random_room"));
    int next_id = 1;
    for (const auto& o : desc.objects) next_id = std::max(next_id, o.instance_id + 1);
    std::vector<Vec3> placed;
    for (const auto& o : desc.objects) placed.push_back(o.pose.translation);
    for (int i = 0; i < rr.count; ++i) {
      ScenePrimitive p;
      p.instance_id = next_id++;
      p.semantic_class = rr.classes[rng.uniform_index(rr.classes.size())];
      if (p.semantic_class == "chair") {
        p.kind = PrimitiveKind::Chair;
        p.chair.back_height = rng.uniform() < 0.5 ? 0.0 : rng.uniform(0.3, 0.5);
      } else if (p.semantic_class == "cylinder") {
        p.kind = PrimitiveKind::Cylinder;
        p.cyl_radius = rng.uniform(0.08, 0.2);
        p.cyl_height = rng.uniform(0.3, 0.7);
      } else {
        p.kind = PrimitiveKind::Box;
        p.box_half = Vec3(rng.uniform(0.1, 0.3), rng.uniform(0.1, 0.3), rng.uniform(0.1, 0.3));
      }
      p.albedo = RGB(rng.uniform(0.2, 0.9), rng.uniform(0.2, 0.9), rng.uniform(0.2, 0.9));
      Vec3 pos;
      bool ok = false;
      for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
        pos = Vec3(rng.uniform(-rr.region_half, rr.region_half),
                   rng.uniform(-rr.region_half, rr.region_half), desc.floor_z);
        ok = true;
        for (const Vec3& q : placed)
          if ((pos - q).head<2>().norm() < 0.55) ok = false;
      }
      if (!ok) throw ConfigError("random_room: could not place all objects");
      placed.push_back(pos);
      const double yaw = rng.uniform(0.0, 2.0 * M_PI);
      p.pose.rotation = Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix();
      p.pose.translation = pos;
      desc.objects.push_back(p);
    }
    desc.random_room.reset();
  }

  std::set<int> ids;
  for (const auto& o : desc.objects) {
    if (o.instance_id < 1) throw ConfigError("instance ids must be >= 1");
    if (!ids.insert(o.instance_id).second)
      throw ConfigError("duplicate instance id " + std::to_string(o.instance_id));
    if (o.semantic_class.empty()) throw ConfigError("missing semantic class");
    const bool dims_ok =
        (o.kind == PrimitiveKind::Box && o.box_half.minCoeff() > 0) ||
        (o.kind == PrimitiveKind::Cylinder && o.cyl_radius > 0 && o.cyl_height > 0) ||
        (o.kind == PrimitiveKind::Chair && o.chair.seat_half.minCoeff() > 0 &&
         o.chair.leg_length > 0 && o.chair.leg_thickness > 0 && o.chair.back_height >= 0);
    if (!dims_ok) throw ConfigError("non-positive dimensions on instance " +
                                    std::to_string(o.instance_id));
  }

  std::set<std::string> classes;
  for (const auto& o : desc.objects) classes.insert(o.semantic_class);
  std::uint16_t next = 1;
  for (const auto& name : classes) scene.class_ids[name] = next++;
  return scene;
}

TriangleMesh ground_truth_mesh(const ScenePrimitive& prim) {
  TriangleMesh local;
  local.provenance_id = prim.instance_id;
  if (prim.kind == PrimitiveKind::Cylinder) {
    append_cylinder_mesh(local, prim.cyl_radius, prim.cyl_height);
  } else {
    for (const LocalBox& b : primitive_boxes(prim))
      append_box_mesh(local, b);
  }
  return local.transformed(prim.pose);
}

OrientedBox primitive_bounds(const ScenePrimitive& prim) {
  const TriangleMesh mesh = ground_truth_mesh(prim);
  geom::PointCloud3 cloud;
  cloud.points = mesh.vertices;
  return geom::fit_obb(cloud);
}

bool intersect_primitive(const ScenePrimitive& prim, const Vec3& origin, const Vec3& dir,
                         double t_min, double& t_hit, Vec3& normal) {
  const RigidPose inv = prim.pose.inverse();
  const Vec3 o = inv.apply(origin);
  const Vec3 d = inv.rotation * dir;

  double best = std::numeric_limits<double>::infinity();
  Vec3 best_n = Vec3::Zero();
  if (prim.kind == PrimitiveKind::Cylinder) {
    double t;
    Vec3 n;
    if (intersect_local_cylinder(o, d, prim.cyl_radius, prim.cyl_height, t_min, t, n)) {
      best = t;
      best_n = n;
    }
  } else {
    for (const LocalBox& b : primitive_boxes(prim)) {
      double t;
      Vec3 n;
      if (intersect_local_aabb(o, d, b.center - b.half, b.center + b.half, t_min, t, n) &&
          t < best) {
        best = t;
        best_n = n;
      }
    }
  }
  if (!std::isfinite(best)) return false;
  t_hit = best;
  normal = prim.pose.rotation * best_n;
  return true;
}

}  // namespace objmap::synth
