#include "slf/config.hpp"

#include <charconv>
#include <fstream>

#include "slf/error.hpp"

namespace slf {

namespace {

// key, default value; order here drives the CLI flag listing.
const std::vector<std::pair<std::string, std::string>>& default_entries() {
  static const std::vector<std::pair<std::string, std::string>> entries = {
      {"data", ""},
      {"building", "building0"},
      {"out", "."},
      {"create", "false"},
      {"seed", "1"},
      {"model", "seq2seq"},
      {"model_file", ""},
      {"appliance", ""},
      {"appliances", ""},  // optional column filter / synth roster override
      // preprocessing
      {"resample_minutes", "10"},
      {"input_steps", "144"},
      {"horizon_steps", "6"},
      {"stride", "6"},
      {"train_ratio", "0.7"},
      {"val_ratio", "0.2"},
      {"test_ratio", "0.1"},
      // model hyperparameters
      {"hidden_size", "64"},
      {"lambda_dec", "1.0"},
      {"lambda_cls", "0.2"},
      {"conv_channels", "32"},
      {"conv_kernel_width", "2"},
      {"conv_layers", "8"},
      {"varma_p", "4"},
      {"varma_q", "1"},
      // optimizer / schedule
      {"lr", "0.001"},
      {"beta1", "0.9"},
      {"beta2", "0.999"},
      {"eps", "1e-8"},
      {"clip_norm", "5.0"},
      {"epochs", "200"},
      {"patience", "10"},
      {"batch_size", "32"},
      // synthesis
      {"synth_days", "160"},
      {"synth_step_minutes", "1"},
      {"synth_gap_fraction", "0"},
  };
  return entries;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  std::size_t e = s.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig::RunConfig() {
  for (const auto& [k, v] : default_entries()) values_[k] = v;
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Status::Io, "cannot open config " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      fail(Status::Parse, path + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    require(!key.empty(), Status::Parse,
            path + ":" + std::to_string(line_no) + ": empty key");
    values_[key] = value;
  }
}

void RunConfig::set(const std::string& key, const std::string& value) {
  require(!key.empty(), Status::InvalidArgument, "config: empty key");
  values_[key] = value;
}

bool RunConfig::has(const std::string& key) const {
  auto it = values_.find(key);
  return it != values_.end() && !it->second.empty();
}

std::string RunConfig::get_string(const std::string& key) const {
  auto it = values_.find(key);
  require(it != values_.end(), Status::InvalidArgument,
          "config: unknown key " + key);
  return it->second;
}

double RunConfig::get_double(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    require(pos == v.size(), Status::Parse, "");
    return d;
  } catch (const std::exception&) {
    fail(Status::Parse, "config: key " + key + " is not a number: '" + v + "'");
  }
}

std::int64_t RunConfig::get_int(const std::string& key) const {
  const std::string v = get_string(key);
  std::int64_t out;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    fail(Status::Parse, "config: key " + key + " is not an integer: '" + v + "'");
  }
  return out;
}

std::uint64_t RunConfig::get_uint(const std::string& key) const {
  const std::string v = get_string(key);
  std::uint64_t out;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    fail(Status::Parse,
         "config: key " + key + " is not an unsigned integer: '" + v + "'");
  }
  return out;
}

bool RunConfig::get_bool(const std::string& key) const {
  const std::string v = get_string(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(Status::Parse, "config: key " + key + " is not a boolean: '" + v + "'");
}

std::vector<std::string> RunConfig::get_list(const std::string& key) const {
  const std::string v = get_string(key);
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= v.size() && !v.empty()) {
    const std::size_t comma = v.find(',', start);
    const std::string item =
        trim(comma == std::string::npos ? v.substr(start)
                                        : v.substr(start, comma - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

const std::vector<std::string>& RunConfig::known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [key, value] : default_entries()) k.push_back(key);
    return k;
  }();
  return keys;
}

void RunConfig::validate_keys() const {
  std::vector<std::string> roster = get_list("appliances");
  for (const auto& [key, value] : values_) {
    bool known = false;
    for (const std::string& k : known_keys()) {
      if (k == key) {
        known = true;
        break;
      }
    }
    if (known) continue;
    const std::size_t dotpos = key.find('.');
    if (dotpos != std::string::npos && dotpos > 0) {
      const std::string appliance = key.substr(0, dotpos);
      bool listed = false;
      for (const std::string& a : roster) {
        if (a == appliance) {
          listed = true;
          break;
        }
      }
      if (listed) continue;
      fail(Status::InvalidArgument,
           "config: archetype key '" + key + "' names appliance '" + appliance +
               "' which is not in the appliances list");
    }
    fail(Status::InvalidArgument, "config: unknown key '" + key + "'");
  }
}

}  // namespace slf
