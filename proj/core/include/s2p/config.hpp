#pragma once

// Flat sectioned key=value configuration files:
//
//   # comment
//   [section]
//   key = value
//
// Keys are addressed as "section.key". Entries keep file order.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace s2p {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Config {
 public:
  static Config parse(std::string_view text);
  /// Throws ConfigError naming the path if it cannot be read.
  static Config load(const std::string& path);

  /// Sets or replaces a value.
  void set(const std::string& key, const std::string& value);
  std::optional<std::string> get(const std::string& key) const;
  bool has(const std::string& key) const { return get(key).has_value(); }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  long get_int(const std::string& key, long fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;

  /// Entries of one section, in file order, with the section prefix removed.
  std::vector<std::pair<std::string, std::string>> section(const std::string& name) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  /// Canonical text form: sections in first-appearance order.
  std::string dump() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace s2p
