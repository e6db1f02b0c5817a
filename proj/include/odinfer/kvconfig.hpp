#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace odinfer {

// Flat `key = value` configuration, one pair per line, `#` comments.
// Related keys group by dotted prefixes (feed.<id>.url, hotspot.<name>).
class KvConfig {
 public:
  static KvConfig parse_file(const std::filesystem::path& path);
  static KvConfig parse_string(std::string_view text);

  void set(const std::string& key, std::string value);
  bool has(const std::string& key) const;

  std::string get_str(const std::string& key) const;  // required
  std::string get_str(const std::string& key, std::string fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Comma-separated doubles, e.g. a bbox or hotspot tuple.
  std::vector<double> get_doubles(const std::string& key) const;

  // Key/value pairs whose key starts with prefix, sorted by key, with the
  // prefix stripped.
  std::vector<std::pair<std::string, std::string>> with_prefix(
      std::string_view prefix) const;

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace odinfer
