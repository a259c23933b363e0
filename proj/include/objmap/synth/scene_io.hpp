#pragma once

#include <string>

#include "objmap/synth/frame.hpp"
#include "objmap/synth/scene.hpp"

namespace objmap::synth {

SceneDescription parse_scene(const std::string& json_text);
SceneDescription load_scene(const std::string& path);

/// Serializes a (resolved) description back to its document form.
std::string scene_to_json(const SceneDescription& desc);

/// Writes frame_%04d_{rgb.png, depth.pfm, imask.png, smask.png} plus
/// poses.json (intrinsics, camera poses, azimuths) into `dir`.
void export_sequence(const FrameSequence& seq, const std::string& dir);
FrameSequence import_sequence(const std::string& dir);

}  // namespace objmap::synth
