#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cex {

/// Flat `key = value` text with optional `[section]` headers. Keys inside a
/// section are stored as `section.key`. `#` and `;` start comments; values
/// may be quoted.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text);
  static KeyValueConfig load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  const std::map<std::string, std::string>& values() const { return values_; }

  /// Canonical `key=value\n` rendering (sorted), used for hashing.
  std::string canonical() const;

 private:
  std::map<std::string, std::string> values_;
};

std::string read_file(const std::string& path);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

}  // namespace cex
