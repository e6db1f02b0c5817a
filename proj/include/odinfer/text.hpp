#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "odinfer/errors.hpp"

namespace odinfer {

// Shortest decimal string that round-trips the exact double value, so CSV
// outputs are lossless and byte-deterministic.
inline std::string dtos(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double_field(std::string_view s, std::string_view what) {
  double v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    raise(errc::corrupt_record,
          "bad numeric field '" + std::string(s) + "' for " + std::string(what));
  }
  return v;
}

inline std::int64_t parse_int_field(std::string_view s, std::string_view what) {
  std::int64_t v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    raise(errc::corrupt_record,
          "bad integer field '" + std::string(s) + "' for " + std::string(what));
  }
  return v;
}

// Splits one CSV line on commas. None of the formats used here quote or
// embed commas, so plain splitting is exact.
inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  while (true) {
    auto comma = line.find(',', begin);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(begin));
      return out;
    }
    out.push_back(line.substr(begin, comma - begin));
    begin = comma + 1;
  }
}

}  // namespace odinfer
