#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "odinfer/errors.hpp"
#include "odinfer/geo.hpp"

namespace odinfer {

// One vehicle's row in one free_bike_status snapshot.
struct VehicleRecord {
  std::string vehicle_id;
  double lat{};
  double lon{};
  std::uint8_t is_reserved{};  // 0/1 as on the wire
  std::uint8_t is_disabled{};
  std::int64_t observed_at{};  // POSIX seconds, equals the snapshot's last_updated

  GeoPoint pos() const { return {lat, lon}; }
  friend bool operator==(const VehicleRecord&, const VehicleRecord&) = default;
};

// All available vehicles reported by one feed at one poll instant.
struct Snapshot {
  std::string feed_id;
  std::int64_t captured_at{};
  std::int64_t ttl{};
  std::vector<VehicleRecord> records;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

enum class EndpointKind : std::uint8_t { Origin, Destination };
enum class SourceAlgorithm : std::uint8_t { Static, Resetting, Dynamic };

inline const char* to_string(EndpointKind k) {
  return k == EndpointKind::Origin ? "origin" : "destination";
}
inline const char* to_string(SourceAlgorithm a) {
  switch (a) {
    case SourceAlgorithm::Static: return "static";
    case SourceAlgorithm::Resetting: return "resetting";
    case SourceAlgorithm::Dynamic: return "dynamic";
  }
  return "unknown";
}

inline EndpointKind endpoint_kind_from(std::string_view s) {
  if (s == "origin") return EndpointKind::Origin;
  if (s == "destination") return EndpointKind::Destination;
  raise(errc::schema_violation, "unknown endpoint kind '" + std::string(s) + "'");
}
inline SourceAlgorithm algorithm_from(std::string_view s) {
  if (s == "static") return SourceAlgorithm::Static;
  if (s == "resetting") return SourceAlgorithm::Resetting;
  if (s == "dynamic") return SourceAlgorithm::Dynamic;
  raise(errc::invalid_config, "unknown algorithm '" + std::string(s) + "'");
}

// An inferred trip origin or destination. Unlinked unless part of a TripOD.
struct TripEndpoint {
  EndpointKind kind{};
  double lat{};
  double lon{};
  std::int64_t at{};
  std::string vendor;
  SourceAlgorithm source_algorithm{};

  GeoPoint pos() const { return {lat, lon}; }
  friend bool operator==(const TripEndpoint&, const TripEndpoint&) = default;
};

// A linked origin-destination pair, only inferable from static-ID data.
struct TripOD {
  TripEndpoint origin;
  TripEndpoint destination;
  std::string vehicle_id;
  std::int64_t duration_s{};
  double straight_line_distance_m{};
  double average_speed_ms{};

  friend bool operator==(const TripOD&, const TripOD&) = default;
};

// Derives duration, straight-line distance and average speed.
// destination.at must be strictly after origin.at.
inline TripOD make_trip_od(TripEndpoint origin, TripEndpoint destination,
                           std::string vehicle_id) {
  if (destination.at <= origin.at)
    raise(errc::non_monotonic_stream,
          "trip destination not after origin for vehicle " + vehicle_id);
  TripOD t;
  t.duration_s = destination.at - origin.at;
  t.straight_line_distance_m = geo_distance(origin.pos(), destination.pos());
  t.average_speed_ms =
      t.straight_line_distance_m / static_cast<double>(t.duration_s);
  t.origin = std::move(origin);
  t.destination = std::move(destination);
  t.vehicle_id = std::move(vehicle_id);
  return t;
}

}  // namespace odinfer
