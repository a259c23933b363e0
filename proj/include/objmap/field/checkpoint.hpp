#pragma once

#include <string>

#include "objmap/field/model.hpp"

namespace objmap::field {

/// Binary checkpoint, little-endian:
///   magic "OMFC" (4 bytes), u32 version = 1,
///   header: u32 kind (0 object-level, 1 category), i32 hidden, i32 code_dim,
///           i32 freq, i32 feature_dim, i32 head_hidden, u32 code_count,
///   parameter blocks as float32 in for_each_tensor order (column-major),
///   code table: per member i32 owner id, float32 z_shape[code_dim],
///               float32 z_texture[code_dim].
void save_checkpoint(const FieldModel<float>& model, const CodeTable<float>& codes,
                     const std::string& path);
void save_checkpoint(const FieldModel<double>& model, const CodeTable<double>& codes,
                     const std::string& path);

struct LoadedModel {
  FieldModel<float> model;
  CodeTable<float> codes;
};
LoadedModel load_checkpoint(const std::string& path);

}  // namespace objmap::field
