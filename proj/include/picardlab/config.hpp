#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace picardlab {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error("config field '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Flat key = value experiment description. '#' starts a comment, blank
/// lines are skipped, keys are [a-z0-9_]. serialize() emits keys sorted,
/// so parse(serialize()) is the identity and the hash is stable.
class ExperimentConfig {
 public:
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  std::string serialize() const;
  std::uint64_t hash() const;  // FNV-1a over serialize()

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_f64(const std::string& key, double fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const;
  std::vector<double> get_f64_list(const std::string& key,
                                   const std::vector<double>& fallback) const;
  std::vector<std::string> get_string_list(const std::string& key,
                                           const std::vector<std::string>& fallback) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

  /// Rejects keys outside `allowed` (catching typos before any work runs).
  void restrict_keys(const std::vector<std::string>& allowed) const;

 private:
  std::map<std::string, std::string> kv_;
};

/// Fixed default seed published in the README; never time-derived.
inline constexpr std::uint64_t kDefaultSeed = 123456789ull;

}  // namespace picardlab
