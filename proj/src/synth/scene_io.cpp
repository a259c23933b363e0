#include "objmap/synth/scene_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "objmap/synth/image_io.hpp"

namespace objmap::synth {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

Vec3 vec3_of(const ordered_json& j) {
  if (!j.is_array() || j.size() != 3) throw ConfigError("expected a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

ordered_json json_of(const Vec3& v) { return ordered_json::array({v.x(), v.y(), v.z()}); }

ordered_json json_of(const Mat3& m) {
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < 3; ++r) rows.push_back(ordered_json::array({m(r, 0), m(r, 1), m(r, 2)}));
  return rows;
}

Mat3 mat3_of(const ordered_json& j) {
  Mat3 m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = j.at(r).at(c).get<double>();
  return m;
}

PrimitiveKind kind_of(const std::string& s) {
  if (s == "box") return PrimitiveKind::Box;
  if (s == "cylinder") return PrimitiveKind::Cylinder;
  if (s == "chair") return PrimitiveKind::Chair;
  throw ConfigError("unknown primitive kind: " + s);
}

std::string kind_name(PrimitiveKind k) {
  switch (k) {
    case PrimitiveKind::Box: return "box";
    case PrimitiveKind::Cylinder: return "cylinder";
    default: return "chair";
  }
}

}  // namespace

SceneDescription parse_scene(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("scene parse error: ") + e.what());
  }
  SceneDescription d;
  d.seed = j.value("seed", 0ull);
  if (j.contains("image")) {
    const auto& im = j["image"];
    d.width = im.value("width", d.width);
    d.height = im.value("height", d.height);
    d.intrinsics.fx = im.value("fx", 0.8 * d.width);
    d.intrinsics.fy = im.value("fy", d.intrinsics.fx);
    d.intrinsics.cx = im.value("cx", d.width / 2.0);
    d.intrinsics.cy = im.value("cy", d.height / 2.0);
  } else {
    d.intrinsics = {0.8 * d.width, 0.8 * d.width, d.width / 2.0, d.height / 2.0};
  }
  if (j.contains("floor")) {
    const auto& f = j["floor"];
    d.floor_enabled = f.value("enabled", true);
    d.floor_z = f.value("z", 0.0);
    if (f.contains("albedo")) d.floor_albedo = vec3_of(f["albedo"]);
  }
  if (j.contains("trajectory")) {
    const auto& t = j["trajectory"];
    if (t.contains("center")) d.trajectory.center = vec3_of(t["center"]);
    d.trajectory.radius = t.value("radius", d.trajectory.radius);
    d.trajectory.height = t.value("height", d.trajectory.height);
    d.trajectory.frame_count = t.value("frames", d.trajectory.frame_count);
    d.trajectory.start_deg = t.value("start_deg", 0.0);
    d.trajectory.end_deg = t.value("end_deg", 360.0);
  }
  if (j.contains("random_room")) {
    RandomRoomSpec rr;
    rr.count = j["random_room"].value("count", 0);
    rr.region_half = j["random_room"].value("region_half", 1.0);
    for (const auto& c : j["random_room"].value("classes", ordered_json::array()))
      rr.classes.push_back(c.get<std::string>());
    d.random_room = rr;
  }
  for (const auto& o : j.value("objects", ordered_json::array())) {
    ScenePrimitive p;
    p.instance_id = o.value("id", 0);
    p.semantic_class = o.value("class", std::string());
    p.kind = kind_of(o.value("kind", std::string("box")));
    if (o.contains("albedo")) p.albedo = vec3_of(o["albedo"]);
    if (o.contains("pose")) {
      const auto& ps = o["pose"];
      if (ps.contains("position")) p.pose.translation = vec3_of(ps["position"]);
      if (ps.contains("yaw_deg"))
        p.pose.rotation =
            Eigen::AngleAxisd(ps["yaw_deg"].get<double>() * M_PI / 180.0, Vec3::UnitZ())
                .toRotationMatrix();
      if (ps.contains("rotation")) p.pose.rotation = mat3_of(ps["rotation"]);
    }
    const auto params = o.value("params", ordered_json::object());
    if (p.kind == PrimitiveKind::Box && params.contains("half_extents"))
      p.box_half = vec3_of(params["half_extents"]);
    if (p.kind == PrimitiveKind::Cylinder) {
      p.cyl_radius = params.value("radius", p.cyl_radius);
      p.cyl_height = params.value("height", p.cyl_height);
    }
    if (p.kind == PrimitiveKind::Chair) {
      if (params.contains("seat_half")) p.chair.seat_half = vec3_of(params["seat_half"]);
      p.chair.back_height = params.value("back_height", p.chair.back_height);
      p.chair.back_thickness = params.value("back_thickness", p.chair.back_thickness);
      p.chair.leg_length = params.value("leg_length", p.chair.leg_length);
      p.chair.leg_thickness = params.value("leg_thickness", p.chair.leg_thickness);
    }
    if (o.contains("coverage")) {
      p.coverage_start_deg = o["coverage"].value("start_deg", 0.0);
      p.coverage_end_deg = o["coverage"].value("end_deg", 360.0);
    }
    d.objects.push_back(p);
  }
  return d;
}

SceneDescription load_scene(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read scene: " + path);
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return parse_scene(text);
}

std::string scene_to_json(const SceneDescription& d) {
  ordered_json j;
  j["seed"] = d.seed;
  j["image"] = {{"width", d.width},
                {"height", d.height},
                {"fx", d.intrinsics.fx},
                {"fy", d.intrinsics.fy},
                {"cx", d.intrinsics.cx},
                {"cy", d.intrinsics.cy}};
  j["floor"] = {{"enabled", d.floor_enabled}, {"z", d.floor_z}, {"albedo", json_of(d.floor_albedo)}};
  j["trajectory"] = {{"center", json_of(d.trajectory.center)},
                     {"radius", d.trajectory.radius},
                     {"height", d.trajectory.height},
                     {"frames", d.trajectory.frame_count},
                     {"start_deg", d.trajectory.start_deg},
                     {"end_deg", d.trajectory.end_deg}};
  ordered_json objs = ordered_json::array();
  for (const auto& p : d.objects) {
    ordered_json o;
    o["id"] = p.instance_id;
    o["class"] = p.semantic_class;
    o["kind"] = kind_name(p.kind);
    o["albedo"] = json_of(p.albedo);
    o["pose"] = {{"position", json_of(p.pose.translation)}, {"rotation", json_of(p.pose.rotation)}};
    ordered_json params;
    if (p.kind == PrimitiveKind::Box) params["half_extents"] = json_of(p.box_half);
    if (p.kind == PrimitiveKind::Cylinder) {
      params["radius"] = p.cyl_radius;
      params["height"] = p.cyl_height;
    }
    if (p.kind == PrimitiveKind::Chair) {
      params["seat_half"] = json_of(p.chair.seat_half);
      params["back_height"] = p.chair.back_height;
      params["back_thickness"] = p.chair.back_thickness;
      params["leg_length"] = p.chair.leg_length;
      params["leg_thickness"] = p.chair.leg_thickness;
    }
    o["params"] = params;
    o["coverage"] = {{"start_deg", p.coverage_start_deg}, {"end_deg", p.coverage_end_deg}};
    objs.push_back(o);
  }
  j["objects"] = objs;
  return j.dump(2) + "\n";
}

void export_sequence(const FrameSequence& seq, const std::string& dir) {
  fs::create_directories(dir);
  ordered_json poses = ordered_json::array();
  char name[64];
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    const Frame& f = seq.frames[i];
    std::snprintf(name, sizeof(name), "frame_%04zu", i);
    const std::string stem = dir + "/" + name;
    save_png_rgb(f.rgb_r, f.rgb_g, f.rgb_b, stem + "_rgb.png");
    save_pfm(f.depth, stem + "_depth.pfm");
    save_png_gray16(f.instance_mask, stem + "_imask.png");
    save_png_gray16(f.semantic_mask, stem + "_smask.png");
    ordered_json p;
    p["rotation"] = json_of(f.camera.rotation);
    p["position"] = json_of(f.camera.translation);
    p["azimuth_deg"] = seq.azimuth_deg[i];
    p["fx"] = f.intrinsics.fx;
    p["fy"] = f.intrinsics.fy;
    p["cx"] = f.intrinsics.cx;
    p["cy"] = f.intrinsics.cy;
    poses.push_back(p);
  }
  std::ofstream out(dir + "/poses.json");
  out << poses.dump(2) << "\n";
  if (!out) throw IoError("cannot write poses.json in " + dir);
}

FrameSequence import_sequence(const std::string& dir) {
  std::ifstream in(dir + "/poses.json");
  if (!in) throw IoError("cannot read poses.json in " + dir);
  ordered_json poses = ordered_json::parse(in);
  FrameSequence seq;
  char name[64];
  for (std::size_t i = 0; i < poses.size(); ++i) {
    std::snprintf(name, sizeof(name), "frame_%04zu", i);
    const std::string stem = dir + "/" + name;
    Frame f;
    load_png_rgb(stem + "_rgb.png", f.rgb_r, f.rgb_g, f.rgb_b);
    f.depth = load_pfm(stem + "_depth.pfm");
    f.instance_mask = load_png_gray16(stem + "_imask.png");
    f.semantic_mask = load_png_gray16(stem + "_smask.png");
    const auto& p = poses[i];
    f.camera.rotation = mat3_of(p["rotation"]);
    f.camera.translation = vec3_of(p["position"]);
    f.intrinsics = {p["fx"].get<double>(), p["fy"].get<double>(), p["cx"].get<double>(),
                    p["cy"].get<double>()};
    seq.frames.push_back(std::move(f));
    seq.azimuth_deg.push_back(p["azimuth_deg"].get<double>());
  }
  return seq;
}

}  // namespace objmap::synth
