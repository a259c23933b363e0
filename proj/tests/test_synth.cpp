#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "objmap/recon/mesh.hpp"
#include "objmap/synth/observation.hpp"
#include "objmap/synth/render.hpp"
#include "objmap/synth/scene_io.hpp"

using namespace objmap;
using namespace objmap::synth;

namespace {

SceneDescription desk_scene() {
  SceneDescription d;
  d.seed = 3;
  d.width = 160;
  d.height = 120;
  d.intrinsics = {130, 130, 80, 60};
  d.trajectory.center = Vec3(0, 0, 0.3);
  d.trajectory.radius = 1.8;
  d.trajectory.height = 1.0;
  d.trajectory.frame_count = 12;

  ScenePrimitive chair;
  chair.kind = PrimitiveKind::Chair;
  chair.instance_id = 1;
  chair.semantic_class = "chair";
  chair.albedo = RGB(0.8, 0.3, 0.2);
  chair.pose.translation = Vec3(0.3, 0.0, 0.0);
  d.objects.push_back(chair);

  ScenePrimitive box;
  box.kind = PrimitiveKind::Box;
  box.instance_id = 2;
  box.semantic_class = "box";
  box.albedo = RGB(0.2, 0.5, 0.8);
  box.box_half = Vec3(0.15, 0.15, 0.15);
  box.pose.translation = Vec3(-0.45, 0.2, 0.0);
  d.objects.push_back(box);
  return d;
}

}  // namespace

TEST_CASE("build_scene keeps two identical chairs with distinct ids") {
  SceneDescription d;
  ScenePrimitive a, b;
  a.kind = b.kind = PrimitiveKind::Chair;
  a.semantic_class = b.semantic_class = "chair";
  a.instance_id = 1;
  b.instance_id = 2;
  b.pose.rotation = Eigen::AngleAxisd(M_PI, Vec3::UnitZ()).toRotationMatrix();
  b.pose.translation = Vec3(1, 0, 0);
  d.objects = {a, b};
  Scene scene = build_scene(d);
  CHECK(scene.desc.objects.size() == 2);
  CHECK(scene.desc.objects[0].semantic_class == scene.desc.objects[1].semantic_class);
  CHECK(scene.class_ids.size() == 1);
}

TEST_CASE("build_scene rejects duplicate ids and accepts empty scenes") {
  SceneDescription d;
  ScenePrimitive a;
  a.instance_id = 1;
  a.semantic_class = "box";
  d.objects = {a, a};
  CHECK_THROWS_AS(build_scene(d), ConfigError);

  SceneDescription empty;
  Scene s = build_scene(empty);
  CHECK(s.desc.objects.empty());
  Frame f = render_frame(s, look_at(Vec3(2, 0, 1), Vec3::Zero()), {130, 130, 80, 60}, 160, 120);
  // background-only scene: no instance pixels anywhere
  for (int y = 0; y < f.height(); ++y)
    for (int x = 0; x < f.width(); ++x) REQUIRE(f.instance_mask.at(x, y) == 0);
}

TEST_CASE("seeded random room is reproducible byte-identically") {
  SceneDescription d;
  d.seed = 99;
  RandomRoomSpec rr;
  rr.count = 6;
  rr.classes = {"chair", "box"};
  rr.region_half = 1.2;
  d.random_room = rr;
  const std::string a = scene_to_json(build_scene(d).desc);
  const std::string b = scene_to_json(build_scene(d).desc);
  CHECK(a == b);
  Scene s = build_scene(d);
  CHECK(s.desc.objects.size() == 6);
  CHECK(!s.desc.random_room.has_value());
}

TEST_CASE("render_frame: frontal box face depth") {
  SceneDescription d;
  d.floor_enabled = false;
  ScenePrimitive box;
  box.kind = PrimitiveKind::Box;
  box.instance_id = 1;
  box.semantic_class = "box";
  box.box_half = Vec3(0.5, 0.5, 0.5);
  // box occupies z in [0,1]; center it on the camera axis
  box.pose.translation = Vec3(0, 0, -0.5);
  d.objects = {box};
  Scene scene = build_scene(d);

  // camera 2 m in front of the face at x = 0.5, looking along -x
  RigidPose cam = look_at(Vec3(2.5, 0, 0), Vec3(-1, 0, 0));
  Frame f = render_frame(scene, cam, {130, 130, 80, 60}, 160, 120);
  const float center_depth = f.depth.at(80, 60);
  CHECK(center_depth == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(f.instance_mask.at(80, 60) == 1);

  // corner pixels miss the box entirely
  CHECK(f.depth.at(0, 0) == 0.0f);
  CHECK(f.instance_mask.at(0, 0) == 0);
}

TEST_CASE("render_frame: occlusion resolves to the nearer primitive") {
  SceneDescription d;
  d.floor_enabled = false;
  ScenePrimitive near_box, far_box;
  near_box.kind = far_box.kind = PrimitiveKind::Box;
  near_box.instance_id = 1;
  near_box.semantic_class = "table";
  near_box.box_half = Vec3(0.3, 0.3, 0.3);
  near_box.pose.translation = Vec3(1.0, 0, -0.3);
  far_box.instance_id = 2;
  far_box.semantic_class = "chair";
  far_box.box_half = Vec3(0.3, 0.3, 0.3);
  far_box.pose.translation = Vec3(0.0, 0, -0.3);
  d.objects = {near_box, far_box};
  Scene scene = build_scene(d);

  RigidPose cam = look_at(Vec3(3, 0, 0), Vec3(0, 0, 0));
  Frame f = render_frame(scene, cam, {130, 130, 80, 60}, 160, 120);
  // the central pixel must belong to the nearer box (analytic depth 1.7)
  CHECK(f.instance_mask.at(80, 60) == 1);
  CHECK(f.depth.at(80, 60) == doctest::Approx(1.7).epsilon(1e-6));
  // chair (id 2) must not own any pixel whose ray the table blocks
  for (int y = 0; y < f.height(); ++y)
    for (int x = 0; x < f.width(); ++x)
      if (f.instance_mask.at(x, y) == 2) REQUIRE(f.depth.at(x, y) > 1.7f);
}

TEST_CASE("mask implies depth matches the instance surface") {
  Scene scene = build_scene(desk_scene());
  FrameSequence seq = render_sequence(scene);
  REQUIRE(seq.frames.size() == 12);
  const Frame& f = seq.frames[2];
  for (int y = 0; y < f.height(); y += 3)
    for (int x = 0; x < f.width(); x += 3) {
      const int id = f.instance_mask.at(x, y);
      if (id == 0) continue;
      const ScenePrimitive* prim = scene.find(id);
      REQUIRE(prim != nullptr);
      double t;
      Vec3 n;
      const Vec3 march = pixel_march(f.intrinsics, f.camera, x, y);
      REQUIRE(intersect_primitive(*prim, f.camera.translation, march, 1e-9, t, n));
      REQUIRE(f.depth.at(x, y) == doctest::Approx(t).epsilon(1e-5));
    }
}

TEST_CASE("back_project: flat box face is planar") {
  SceneDescription d;
  d.floor_enabled = false;
  ScenePrimitive box;
  box.kind = PrimitiveKind::Box;
  box.instance_id = 1;
  box.semantic_class = "box";
  box.box_half = Vec3(0.5, 0.5, 0.5);
  box.pose.translation = Vec3(0, 0, -0.5);
  d.objects = {box};
  Scene scene = build_scene(d);

  FrameSequence seq;
  seq.frames.push_back(
      render_frame(scene, look_at(Vec3(2.5, 0, 0), Vec3(-1, 0, 0)), {130, 130, 80, 60}, 160, 120));
  seq.azimuth_deg.push_back(0.0);

  ObjectObservation obs = back_project(seq, 1, 0.005);
  REQUIRE(obs.cloud.count() > 50);
  // all points on the x = 0.5 plane
  for (const Vec3& p : obs.cloud.points) CHECK(std::abs(p.x() - 0.5) < 1e-6);
  CHECK(obs.keyframes.size() == 1);
}

TEST_CASE("back_project: two opposing views span the box") {
  SceneDescription d;
  d.floor_enabled = false;
  ScenePrimitive box;
  box.kind = PrimitiveKind::Box;
  box.instance_id = 1;
  box.semantic_class = "box";
  box.box_half = Vec3(0.3, 0.25, 0.2);
  box.pose.translation = Vec3(0, 0, -0.2);
  d.objects = {box};
  Scene scene = build_scene(d);

  FrameSequence seq;
  seq.frames.push_back(
      render_frame(scene, look_at(Vec3(2, 0, 0.4), Vec3(0, 0, 0)), {130, 130, 80, 60}, 160, 120));
  seq.frames.push_back(
      render_frame(scene, look_at(Vec3(-2, 0, 0.4), Vec3(0, 0, 0)), {130, 130, 80, 60}, 160, 120));
  seq.azimuth_deg = {0.0, 180.0};

  ObjectObservation obs = back_project(seq, 1, 0.01);
  Vec3 lo, hi;
  obs.cloud.aabb(lo, hi);
  CHECK(hi.x() - lo.x() == doctest::Approx(0.6).epsilon(0.02));

  // every cloud point lies on the ground-truth surface
  recon::MeshDistanceIndex gt(ground_truth_mesh(box));
  for (std::size_t i = 0; i < obs.cloud.count(); i += 7)
    REQUIRE(gt.distance(obs.cloud.points[i]) < 1e-4);
}

TEST_CASE("back_project: unobserved instance is an error, masked pixels only") {
  Scene scene = build_scene(desk_scene());
  FrameSequence seq = render_sequence(scene);
  CHECK_THROWS_AS(back_project(seq, 77), Error);

  ObjectObservation obs = back_project(seq, 2);
  recon::MeshDistanceIndex gt(ground_truth_mesh(*scene.find(2)));
  for (const Vec3& p : obs.cloud.points) REQUIRE(gt.distance(p) < 1e-4);
}

TEST_CASE("occlusion_truncate rules") {
  Scene scene = build_scene(desk_scene());
  Frame f = render_frame(scene, look_at(Vec3(1.8, 0, 1.0), Vec3(0, 0, 0.3)),
                         scene.desc.intrinsics, 160, 120);
  int on_instance_x = -1, on_instance_y = -1;
  int occluder_x = -1, occluder_y = -1, background_x = -1, background_y = -1;
  for (int y = 0; y < f.height(); ++y)
    for (int x = 0; x < f.width(); ++x) {
      const int id = f.instance_mask.at(x, y);
      if (id == 1 && on_instance_x < 0) {
        on_instance_x = x;
        on_instance_y = y;
      } else if (id == 2 && occluder_x < 0) {
        occluder_x = x;
        occluder_y = y;
      } else if (id == 0 && background_x < 0) {
        background_x = x;
        background_y = y;
      }
    }
  REQUIRE(on_instance_x >= 0);
  REQUIRE(occluder_x >= 0);
  REQUIRE(background_x >= 0);

  const double far = 10.0;
  // pixel on another instance: stop just past the occluder
  const double expect = f.depth.at(occluder_x, occluder_y) + 0.02;
  CHECK(occlusion_truncate(f, occluder_x, occluder_y, 1, 0.02, far) ==
        doctest::Approx(expect));
  // pixel on the instance itself and background pixels: full range
  CHECK(occlusion_truncate(f, on_instance_x, on_instance_y, 1, 0.02, far) == far);
  CHECK(occlusion_truncate(f, background_x, background_y, 1, 0.02, far) == far);
}

TEST_CASE("coverage windows filter frames by azimuth") {
  Scene scene = build_scene(desk_scene());
  FrameSequence seq = render_sequence(scene);
  auto all = coverage_frames(seq, 0, 360, 1);
  auto half = coverage_frames(seq, 0, 180, 1);
  auto wrap = coverage_frames(seq, 300, 420, 1);
  CHECK(all.size() == 12);
  CHECK(half.size() == 6);
  CHECK(!wrap.empty());
  for (std::size_t fi : half) CHECK(seq.azimuth_deg[fi] <= 180.0);
}

TEST_CASE("scene json round trip") {
  SceneDescription d = desk_scene();
  const std::string text = scene_to_json(d);
  SceneDescription back = parse_scene(text);
  CHECK(scene_to_json(back) == text);
  CHECK(back.objects.size() == d.objects.size());
  CHECK(back.intrinsics.fx == d.intrinsics.fx);
}

TEST_CASE("frame export/import is lossless") {
  Scene scene = build_scene(desk_scene());
  FrameSequence seq;
  seq.frames.push_back(render_frame(scene, look_at(Vec3(1.8, 0.3, 1.0), Vec3(0, 0, 0.3)),
                                    scene.desc.intrinsics, 160, 120));
  seq.azimuth_deg.push_back(42.0);

  const std::string dir = "test_frames";
  export_sequence(seq, dir);
  FrameSequence back = import_sequence(dir);
  REQUIRE(back.frames.size() == 1);
  const Frame &a = seq.frames[0], &b = back.frames[0];
  CHECK(a.depth.data == b.depth.data);
  CHECK(a.rgb_r.data == b.rgb_r.data);
  CHECK(a.instance_mask.data == b.instance_mask.data);
  CHECK(a.semantic_mask.data == b.semantic_mask.data);
  CHECK((a.camera.rotation - b.camera.rotation).cwiseAbs().maxCoeff() == 0.0);
  std::filesystem::remove_all(dir);
}
