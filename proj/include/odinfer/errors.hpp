#pragma once

#include <stdexcept>
#include <string>

namespace odinfer {

enum class errc {
  malformed_json,
  missing_field,
  duplicate_vehicle_id,
  schema_violation,
  storage_io,
  corrupt_record,
  fatal_config,
  invalid_config,
  invalid_interval,
  non_monotonic_stream,
  overlapping_trips,
  grid_mismatch,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::malformed_json: return "malformed_json";
    case errc::missing_field: return "missing_field";
    case errc::duplicate_vehicle_id: return "duplicate_vehicle_id";
    case errc::schema_violation: return "schema_violation";
    case errc::storage_io: return "storage_io";
    case errc::corrupt_record: return "corrupt_record";
    case errc::fatal_config: return "fatal_config";
    case errc::invalid_config: return "invalid_config";
    case errc::invalid_interval: return "invalid_interval";
    case errc::non_monotonic_stream: return "non_monotonic_stream";
    case errc::overlapping_trips: return "overlapping_trips";
    case errc::grid_mismatch: return "grid_mismatch";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg),
        code_(code) {}

  errc code() const noexcept { return code_; }

  // I/O-flavored failures get a distinct process exit code in the CLI.
  bool is_io() const noexcept {
    return code_ == errc::storage_io || code_ == errc::corrupt_record;
  }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& msg) {
  throw error(code, msg);
}

}  // namespace odinfer
