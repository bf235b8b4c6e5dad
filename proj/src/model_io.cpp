#include "slf/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

static_assert(std::endian::native == std::endian::little,
              "model files are little-endian; big-endian hosts need byte swaps");

namespace slf {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  out.append(b, 4);
}

std::uint32_t get_u32(const std::string& buf, std::size_t offset) {
  std::uint32_t v;
  std::memcpy(&v, buf.data() + offset, 4);
  return v;
}

}  // namespace

void save_model_file(const std::string& path, const std::string& kind,
                     const nlohmann::json& config, const ParamRefs& arrays) {
  nlohmann::json manifest = nlohmann::json::array();
  for (const ParamRef& r : arrays) {
    manifest.push_back({{"name", r.name}, {"shape", {r.rows, r.cols}}});
  }
  nlohmann::json meta = {
      {"kind", kind},
      {"config", config},
      {"arrays", manifest},
  };
  const std::string meta_text = meta.dump();

  std::string out;
  out.append(kModelMagic, 4);
  put_u32(out, kModelFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(meta_text.size()));
  out += meta_text;
  for (const ParamRef& r : arrays) {
    out.append(reinterpret_cast<const char*>(r.data), r.len() * sizeof(double));
  }

  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Status::Io, "cannot write " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) fail(Status::Io, "write failed for " + path);
}

const LoadedArray& LoadedModelFile::find(const std::string& name) const {
  for (const LoadedArray& a : arrays) {
    if (a.name == name) return a;
  }
  fail(Status::Format, "model file is missing array " + name);
}

LoadedModelFile load_model_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Status::Io, "cannot open " + path);
  std::string buf((std::istreambuf_iterator<char>(f)),
                  std::istreambuf_iterator<char>());

  require(buf.size() >= 12, Status::Format, path + ": truncated model file");
  require(std::memcmp(buf.data(), kModelMagic, 4) == 0, Status::Format,
          path + ": not a model file (bad magic)");
  const std::uint32_t version = get_u32(buf, 4);
  if (version != kModelFormatVersion) {
    fail(Status::Format, path + ": unsupported model format version " +
                             std::to_string(version));
  }
  const std::uint32_t meta_len = get_u32(buf, 8);
  require(buf.size() >= 12 + static_cast<std::size_t>(meta_len), Status::Format,
          path + ": truncated metadata");

  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(buf.substr(12, meta_len));
  } catch (const nlohmann::json::exception& e) {
    fail(Status::Format, path + ": bad metadata: " + e.what());
  }

  LoadedModelFile out;
  try {
    out.kind = meta.at("kind").get<std::string>();
    out.config = meta.at("config");
    std::size_t offset = 12 + meta_len;
    for (const nlohmann::json& entry : meta.at("arrays")) {
      LoadedArray a;
      a.name = entry.at("name").get<std::string>();
      const std::size_t rows = entry.at("shape").at(0).get<std::size_t>();
      const std::size_t cols = entry.at("shape").at(1).get<std::size_t>();
      a.values = Array2D(rows, cols);
      const std::size_t bytes = rows * cols * sizeof(double);
      require(offset + bytes <= buf.size(), Status::Format,
              path + ": truncated array data for " + a.name);
      std::memcpy(a.values.data.data(), buf.data() + offset, bytes);
      offset += bytes;
      out.arrays.push_back(std::move(a));
    }
    require(offset == buf.size(), Status::Format,
            path + ": trailing bytes after array data");
  } catch (const nlohmann::json::exception& e) {
    fail(Status::Format, path + ": bad metadata: " + e.what());
  }
  return out;
}

void restore_params(const LoadedModelFile& file, const ParamRefs& refs) {
  require(file.arrays.size() == refs.size(), Status::Format,
          "model file array count does not match the expected manifest");
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const LoadedArray& a = file.arrays[i];
    const ParamRef& r = refs[i];
    require(a.name == r.name && a.values.rows == r.rows && a.values.cols == r.cols,
            Status::Format,
            "model file array " + a.name + " does not match expected " + r.name);
    std::memcpy(r.data, a.values.data.data(), r.len() * sizeof(double));
  }
}

}  // namespace slf
