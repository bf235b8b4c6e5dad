#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace slf {

// Flat key = value run configuration. '#' starts a comment, blank lines are
// skipped. Every key can also be set programmatically (the CLI maps each
// known key onto a same-named flag). Unknown keys are tolerated at load time
// and validated when a command consumes the config, because archetype keys
// are dynamic ("<appliance>.<param>").
class RunConfig {
 public:
  RunConfig();  // populated with defaults

  void load_file(const std::string& path);
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key) const;
  bool get_bool(const std::string& key) const;

  // Comma-separated list value.
  std::vector<std::string> get_list(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }

  // Keys with built-in defaults, in a stable order (drives CLI flag setup).
  static const std::vector<std::string>& known_keys();

  // Rejects keys that are neither known nor "<appliance>.<param>" for a
  // declared appliance.
  void validate_keys() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace slf
