#pragma once

// Flat key=value run configuration. Later sources override earlier ones:
// config file, then flags, then --set KEY=VAL.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace ptfprg {

inline constexpr std::uint64_t kDefaultMasterSeed = 0x5EED;

/// Hex seed, with or without a 0x prefix.
std::uint64_t parse_seed(std::string_view text);
std::string format_seed(std::uint64_t seed);

class RunConfig {
 public:
  RunConfig() = default;

  /// Lines of `key = value`; blank lines and `#` comments are skipped.
  static RunConfig parse(std::string_view text);
  static RunConfig load(const std::string& path);

  void set(const std::string& key, std::string value);
  /// Parses `KEY=VAL`.
  void set_assignment(std::string_view assignment);
  void merge(const RunConfig& overrides);

  bool has(const std::string& key) const { return values_.contains(key); }
  std::optional<std::string> get(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated lists.
  std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;
  std::vector<unsigned> get_uints(const std::string& key, std::vector<unsigned> fallback) const;

  std::optional<double> find_double(const std::string& key) const;
  std::optional<std::uint64_t> find_uint(const std::string& key) const;

  /// `seed` key, hex; kDefaultMasterSeed when absent.
  std::uint64_t master_seed() const;

  const std::map<std::string, std::string>& values() const noexcept { return values_; }
  nlohmann::json to_json() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace ptfprg
