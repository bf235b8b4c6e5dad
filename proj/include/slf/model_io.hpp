#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "slf/adam.hpp"
#include "slf/array.hpp"

namespace slf {

inline constexpr char kModelMagic[4] = {'L', 'S', 'Q', '1'};
inline constexpr std::uint32_t kModelFormatVersion = 1;

// Binary model container: magic "LSQ1", u32 LE format version, u32 LE
// metadata byte length, UTF-8 JSON metadata (model kind, config values and
// the array manifest), then each array as little-endian f64 in manifest
// order. Unknown versions are rejected.
void save_model_file(const std::string& path, const std::string& kind,
                     const nlohmann::json& config, const ParamRefs& arrays);

struct LoadedArray {
  std::string name;
  Array2D values;
};

struct LoadedModelFile {
  std::string kind;
  nlohmann::json config;
  std::vector<LoadedArray> arrays;

  const LoadedArray& find(const std::string& name) const;  // throws Format
};

LoadedModelFile load_model_file(const std::string& path);

// Copies loaded arrays into a live parameter set; names and shapes must match
// the collect() manifest exactly.
void restore_params(const LoadedModelFile& file, const ParamRefs& refs);

}  // namespace slf
