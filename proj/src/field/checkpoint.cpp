#include "objmap/field/checkpoint.hpp"

#include <cstring>
#include <fstream>

namespace objmap::field {

namespace {

constexpr char kMagic[4] = {'O', 'M', 'F', 'C'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ofstream& f, T v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& f) {
  T v{};
  f.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

template <class S>
void save_impl(const FieldModel<S>& model, const CodeTable<S>& codes, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write checkpoint " + path);
  f.write(kMagic, 4);
  put<std::uint32_t>(f, kVersion);
  const ModelConfig& c = model.config;
  put<std::uint32_t>(f, c.is_category() ? 1u : 0u);
  put<std::int32_t>(f, c.hidden);
  put<std::int32_t>(f, c.code_dim);
  put<std::int32_t>(f, c.freq);
  put<std::int32_t>(f, c.feature_dim);
  put<std::int32_t>(f, c.head_hidden);
  put<std::uint32_t>(f, static_cast<std::uint32_t>(codes.count()));
  model.for_each_tensor([&](const char*, const auto& t) {
    for (Eigen::Index i = 0; i < t.size(); ++i)
      put<float>(f, static_cast<float>(t.data()[i]));
  });
  for (int k = 0; k < codes.count(); ++k) {
    put<std::int32_t>(f, codes.owner_ids[k]);
    for (int j = 0; j < c.code_dim; ++j) put<float>(f, static_cast<float>(codes.z_shape(k, j)));
    for (int j = 0; j < c.code_dim; ++j)
      put<float>(f, static_cast<float>(codes.z_texture(k, j)));
  }
  if (!f) throw IoError("checkpoint write failed: " + path);
}

}  // namespace

void save_checkpoint(const FieldModel<float>& model, const CodeTable<float>& codes,
                     const std::string& path) {
  save_impl(model, codes, path);
}
void save_checkpoint(const FieldModel<double>& model, const CodeTable<double>& codes,
                     const std::string& path) {
  save_impl(model, codes, path);
}

LoadedModel load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read checkpoint " + path);
  char magic[4];
  f.read(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw IoError("bad checkpoint magic in " + path);
  if (get<std::uint32_t>(f) != kVersion) throw IoError("unsupported checkpoint version");
  const std::uint32_t kind = get<std::uint32_t>(f);
  ModelConfig cfg;
  cfg.hidden = get<std::int32_t>(f);
  cfg.code_dim = get<std::int32_t>(f);
  cfg.freq = get<std::int32_t>(f);
  cfg.feature_dim = get<std::int32_t>(f);
  cfg.head_hidden = get<std::int32_t>(f);
  if ((kind == 1) != cfg.is_category()) throw IoError("inconsistent checkpoint header");
  const std::uint32_t n_codes = get<std::uint32_t>(f);

  LoadedModel out;
  out.model = FieldModel<float>::initialized(cfg, 0);
  out.model.for_each_tensor([&](const char*, auto& t) {
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = get<float>(f);
  });
  out.codes.owner_ids.resize(n_codes);
  out.codes.z_shape.resize(n_codes, cfg.code_dim);
  out.codes.z_texture.resize(n_codes, cfg.code_dim);
  for (std::uint32_t k = 0; k < n_codes; ++k) {
    out.codes.owner_ids[k] = get<std::int32_t>(f);
    for (int j = 0; j < cfg.code_dim; ++j) out.codes.z_shape(k, j) = get<float>(f);
    for (int j = 0; j < cfg.code_dim; ++j) out.codes.z_texture(k, j) = get<float>(f);
  }
  if (!f) throw IoError("truncated checkpoint " + path);
  return out;
}

}  // namespace objmap::field
