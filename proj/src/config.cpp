#include "ptfprg/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ptfprg/error.hpp"

namespace ptfprg {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* what) {
  fail(ErrorKind::configuration, "config key '" + key + "': '" + value + "' is not " + what);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::optional<double> to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

std::optional<std::uint64_t> to_uint(const std::string& s) {
  std::uint64_t v = 0;
  std::string_view digits = s;
  int base = 10;
  if (digits.starts_with("0x") || digits.starts_with("0X")) {
    digits.remove_prefix(2);
    base = 16;
  }
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v, base);
  if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  return v;
}

}  // namespace

std::uint64_t parse_seed(std::string_view text) {
  std::string_view digits = text;
  if (digits.starts_with("0x") || digits.starts_with("0X")) digits.remove_prefix(2);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v, 16);
  if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) {
    fail(ErrorKind::configuration, "seed '" + std::string(text) + "' is not a 64-bit hex value");
  }
  return v;
}

std::string format_seed(std::uint64_t seed) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(seed));
  return buf;
}

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig cfg;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      fail(ErrorKind::configuration, "config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) fail(ErrorKind::configuration, "config line " + std::to_string(line_no) + ": empty key");
    cfg.set(key, trim(std::string_view(t).substr(eq + 1)));
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void RunConfig::set(const std::string& key, std::string value) { values_[key] = std::move(value); }

void RunConfig::set_assignment(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    fail(ErrorKind::configuration, "--set expects KEY=VAL, got '" + std::string(assignment) + "'");
  }
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void RunConfig::merge(const RunConfig& overrides) {
  for (const auto& [k, v] : overrides.values_) values_[k] = v;
}

std::optional<std::string> RunConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

std::optional<double> RunConfig::find_double(const std::string& key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  const auto d = to_double(*v);
  if (!d) bad_value(key, *v, "a number");
  return d;
}

std::optional<std::uint64_t> RunConfig::find_uint(const std::string& key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  const auto u = to_uint(*v);
  if (!u) bad_value(key, *v, "a non-negative integer");
  return u;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  return find_double(key).value_or(fallback);
}

std::uint64_t RunConfig::get_uint(const std::string& key, std::uint64_t fallback) const {
  return find_uint(key).value_or(fallback);
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  if (*v == "1" || *v == "true" || *v == "yes" || *v == "on") return true;
  if (*v == "0" || *v == "false" || *v == "no" || *v == "off") return false;
  bad_value(key, *v, "a boolean");
}

std::vector<double> RunConfig::get_doubles(const std::string& key, std::vector<double> fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(*v)) {
    const auto d = to_double(item);
    if (!d) bad_value(key, *v, "a comma-separated list of numbers");
    out.push_back(*d);
  }
  if (out.empty()) bad_value(key, *v, "a non-empty list");
  return out;
}

std::vector<unsigned> RunConfig::get_uints(const std::string& key, std::vector<unsigned> fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  std::vector<unsigned> out;
  for (const auto& item : split_list(*v)) {
    const auto u = to_uint(item);
    if (!u || *u > 0xFFFFFFFFu) bad_value(key, *v, "a comma-separated list of integers");
    out.push_back(static_cast<unsigned>(*u));
  }
  if (out.empty()) bad_value(key, *v, "a non-empty list");
  return out;
}

std::uint64_t RunConfig::master_seed() const {
  const auto v = get("seed");
  return v ? parse_seed(*v) : kDefaultMasterSeed;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : values_) j[k] = v;
  return j;
}

}  // namespace ptfprg
