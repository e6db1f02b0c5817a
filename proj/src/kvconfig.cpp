#include "odinfer/kvconfig.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "odinfer/errors.hpp"

namespace odinfer {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

}  // namespace

KvConfig KvConfig::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(errc::storage_io, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

KvConfig KvConfig::parse_string(std::string_view text) {
  KvConfig cfg;
  std::size_t lineno = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++lineno;

    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      raise(errc::invalid_config,
            "config line " + std::to_string(lineno) + ": expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty())
      raise(errc::invalid_config,
            "config line " + std::to_string(lineno) + ": empty key");
    cfg.kv_[std::string(key)] = std::string(value);
  }
  return cfg;
}

void KvConfig::set(const std::string& key, std::string value) {
  kv_[key] = std::move(value);
}

bool KvConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string KvConfig::get_str(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end())
    raise(errc::invalid_config, "missing required config key '" + key + "'");
  return it->second;
}

std::string KvConfig::get_str(const std::string& key,
                              std::string fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? std::move(fallback) : it->second;
}

std::int64_t KvConfig::get_int(const std::string& key,
                               std::int64_t fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  std::int64_t v{};
  const auto* first = it->second.data();
  const auto* last = first + it->second.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || p != last)
    raise(errc::invalid_config, "config key '" + key + "' is not an integer");
  return v;
}

double KvConfig::get_double(const std::string& key, double fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    raise(errc::invalid_config, "config key '" + key + "' is not a number");
  }
}

bool KvConfig::get_bool(const std::string& key, bool fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  raise(errc::invalid_config, "config key '" + key + "' is not a boolean");
}

std::vector<double> KvConfig::get_doubles(const std::string& key) const {
  const std::string raw = get_str(key);
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= raw.size()) {
    std::size_t comma = raw.find(',', start);
    if (comma == std::string::npos) comma = raw.size();
    const std::string item(trim(std::string_view(raw).substr(start, comma - start)));
    if (!item.empty()) {
      try {
        out.push_back(std::stod(item));
      } catch (const std::exception&) {
        raise(errc::invalid_config, "config key '" + key + "': bad number '" + item + "'");
      }
    }
    start = comma + 1;
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> KvConfig::with_prefix(
    std::string_view prefix) const {
  std::vector<std::pair<std::string, std::string>> out;
  for (auto it = kv_.lower_bound(std::string(prefix)); it != kv_.end(); ++it) {
    if (it->first.compare(0, prefix.size(), prefix) != 0) break;
    out.emplace_back(it->first.substr(prefix.size()), it->second);
  }
  return out;
}

}  // namespace odinfer
