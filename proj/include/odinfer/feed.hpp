#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "odinfer/types.hpp"

namespace odinfer {

// One GBFS free_bike_status endpoint to poll.
struct FeedConfig {
  std::string feed_id;
  std::string url;
  std::int64_t declared_ttl{0};
  std::int64_t timeout_s{10};
  int max_retries{3};
  std::map<std::string, std::string> headers;  // static HTTP headers

  // Feeds refreshing faster than once a minute are polled every minute;
  // slower feeds are polled exactly at their declared TTL.
  std::int64_t poll_interval_s() const {
    return declared_ttl >= 60 ? declared_ttl : 60;
  }
};

// Parses a free_bike_status payload. bike_id values may arrive as JSON
// strings or bare integers; both are coerced to strings. is_reserved and
// is_disabled accept 0/1 integers or booleans and default to 0 when absent.
// Throws odinfer::error with code malformed_json, missing_field,
// duplicate_vehicle_id or schema_violation.
Snapshot parse_free_bike_status(std::string_view raw, std::string_view feed_id);

// Snapshot back to the wire format:
//   {"last_updated":...,"ttl":...,"data":{"bikes":[...]}}
// Round-trips through parse_free_bike_status to an equal Snapshot.
std::string to_wire_json(const Snapshot& s);

// One line of the NDJSON archive: the wire payload plus "feed_id" and the
// local receipt time "received_at" (diagnostics only; captured_at stays the
// feed's own last_updated).
std::string to_archive_line(const Snapshot& s, std::int64_t received_at);

struct ArchiveLine {
  Snapshot snapshot;
  std::int64_t received_at{};
};
ArchiveLine parse_archive_line(std::string_view line);

}  // namespace odinfer
