#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "objmap/recon/mesh.hpp"
#include "objmap/synth/camera.hpp"

namespace objmap::synth {

using geom::OrientedBox;
using geom::RigidPose;
using recon::TriangleMesh;

enum class PrimitiveKind { Box, Cylinder, Chair };

/// Composite chair: seat slab on four legs, optional back rest. All parts
/// are flush (tangent contact), feet at local z = 0, facing local +x.
struct ChairParams {
  Vec3 seat_half = {0.22, 0.22, 0.025};  // x depth, y width, z half-thickness
  double back_height = 0.4;              // 0 disables the back (stool)
  double back_thickness = 0.025;         // half-thickness along x
  double leg_length = 0.4;
  double leg_thickness = 0.02;           // half-thickness
};

struct ScenePrimitive {
  PrimitiveKind kind = PrimitiveKind::Box;
  RigidPose pose;                  // local -> world; local base plane is z=0
  RGB albedo = {0.7, 0.7, 0.7};
  int instance_id = 0;             // >= 1
  std::string semantic_class;
  Vec3 box_half = {0.2, 0.2, 0.2};         // Box
  double cyl_radius = 0.15, cyl_height = 0.5;  // Cylinder
  ChairParams chair;
  // Fraction of the trajectory this object is observed from (azimuth
  // window, degrees; wraps modulo 360).
  double coverage_start_deg = 0.0, coverage_end_deg = 360.0;
};

struct OrbitTrajectory {
  Vec3 center = Vec3::Zero();
  double radius = 2.0;
  double height = 1.2;
  int frame_count = 30;
  double start_deg = 0.0, end_deg = 360.0;
};

struct RandomRoomSpec {
  int count = 0;
  std::vector<std::string> classes;  // chair | box | cylinder
  double region_half = 1.0;          // placement square half-size, meters
};

struct SceneDescription {
  std::uint64_t seed = 0;
  int width = 200, height = 150;
  Intrinsics intrinsics{160, 160, 100, 75};
  bool floor_enabled = true;
  double floor_z = 0.0;
  RGB floor_albedo = {0.45, 0.45, 0.48};
  std::vector<ScenePrimitive> objects;
  std::optional<RandomRoomSpec> random_room;  // appended when present
  OrbitTrajectory trajectory;
};

struct Scene {
  SceneDescription desc;                      // fully resolved (no random section)
  std::map<std::string, std::uint16_t> class_ids;  // 1-based, 0 = background

  const ScenePrimitive* find(int instance_id) const;
  std::uint16_t class_id(const std::string& name) const;
};

/// Validates the description, expands the random-room section with the
/// scene seed, assigns class ids. Deterministic for a given description.
Scene build_scene(const SceneDescription& desc);

/// World-frame triangle soup of one primitive.
TriangleMesh ground_truth_mesh(const ScenePrimitive& prim);

/// Tight world-frame oriented box of a primitive (from its mesh vertices).
OrientedBox primitive_bounds(const ScenePrimitive& prim);

/// Closest intersection with a primitive along p(t) = origin + t * dir for
/// t > t_min. Returns false on miss; `normal` is the outward world normal.
bool intersect_primitive(const ScenePrimitive& prim, const Vec3& origin, const Vec3& dir,
                         double t_min, double& t_hit, Vec3& normal);

}  // namespace objmap::synth
