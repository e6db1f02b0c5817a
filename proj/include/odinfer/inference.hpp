#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "odinfer/geo.hpp"
#include "odinfer/kvconfig.hpp"
#include "odinfer/types.hpp"

namespace odinfer {

// Trip plausibility criteria, applied to linked OD pairs only (speed is
// undefined for unlinked endpoints). Bounds follow shared-micromobility
// practice: trips longer than 2 h or outside walking-to-riding speeds are
// artifacts, not rides.
struct FilterConfig {
  double max_duration_s = 7200.0;            // 2 hours
  double max_speed_ms = 15.0 * kMphToMs;     // 6.7056 m/s
  double min_speed_ms = 2.2 * kMphToMs;      // 0.983488 m/s

  void validate() const;  // throws invalid_config
};

struct InferenceConfig {
  double scrape_interval_s = 60.0;  // the stream's nominal polling cadence
  double gap_factor = 1.5;          // gap threshold = gap_factor * interval;
                                    // 1.0 reproduces the literal "> interval"
                                    // rule, 1.5 tolerates polling jitter
  double buffer_m = 100.0;          // GPS-jitter vs. real-trip displacement
  bool drop_boundary_endpoints = true;
  bool include_disabled = false;    // feed rows with is_disabled=1
  bool include_reserved = false;    // feed rows with is_reserved=1
  FilterConfig filter;

  double gap_threshold_s() const { return gap_factor * scrape_interval_s; }
  void validate() const;  // throws invalid_config
  static InferenceConfig from_kv(const KvConfig& kv);
};

enum class RejectReason : std::uint8_t { Duration, MaxSpeed, MinSpeed };
const char* to_string(RejectReason r);

struct RejectedTrip {
  TripOD trip;
  RejectReason reason{};
};

struct FilterResult {
  std::vector<TripOD> kept;
  std::vector<RejectedTrip> rejected;
};

// Linked OD inference for static-ID streams: every per-id time gap larger
// than the threshold is one trip. Output sorted by (origin time, vehicle).
std::vector<TripOD> infer_static(const std::vector<Snapshot>& stream,
                                 const InferenceConfig& config);

// Unlinked endpoints for resetting-ID streams: per id, the earliest record
// is where a trip ended (Destination) and the latest is where the next trip
// began (Origin). Boundary records emit nothing when
// drop_boundary_endpoints is set.
std::vector<TripEndpoint> infer_resetting(const std::vector<Snapshot>& stream,
                                          const InferenceConfig& config);

// Unlinked endpoints for dynamic-ID streams: per consecutive snapshot pair,
// drop ids present in both, greedily match the rest by ascending distance
// up to buffer_m (stationary scooters whose ids rotated), and read the
// survivors as trip origins (earlier side) and destinations (later side).
std::vector<TripEndpoint> infer_dynamic(const std::vector<Snapshot>& stream,
                                        const InferenceConfig& config);

// Greedy minimum-distance bipartite matching with the buffer cutoff; ties
// broken by (distance, index in a, index in b). Returns the unmatched index
// sets of a and b. Exposed because it is the algorithmic core of
// infer_dynamic and deserves direct tests.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> match_stationary(
    const std::vector<VehicleRecord>& a, const std::vector<VehicleRecord>& b,
    double buffer_m);

// Splits trips into kept and rejected; rejection reports the first violated
// rule in the order duration, max_speed, min_speed.
FilterResult filter_trips(const std::vector<TripOD>& trips,
                          const FilterConfig& filter);

// Each OD pair contributes one Origin and one Destination endpoint.
std::vector<TripEndpoint> od_to_endpoints(const std::vector<TripOD>& trips);

// CSV formats (lossless shortest-round-trip doubles):
//   endpoints: kind,lat,lon,t,vendor,algorithm
//   od pairs:  o_lat,o_lon,o_t,d_lat,d_lon,d_t,vehicle_id,duration_s,distance_m,speed_ms
void write_endpoints_csv(const std::filesystem::path& path,
                         const std::vector<TripEndpoint>& endpoints);
std::vector<TripEndpoint> read_endpoints_csv(const std::filesystem::path& path);
void write_od_csv(const std::filesystem::path& path,
                  const std::vector<TripOD>& trips);
std::vector<TripOD> read_od_csv(const std::filesystem::path& path);

// Serial, by-the-book implementations of the three algorithms: per-id loops
// and a full pairwise distance matrix with repeated global-minimum
// extraction. They are the test oracle for the parallel/bucketed versions
// above and the baseline for the benchmark target.
namespace reference {

std::vector<TripOD> infer_static(const std::vector<Snapshot>& stream,
                                 const InferenceConfig& config);
std::vector<TripEndpoint> infer_resetting(const std::vector<Snapshot>& stream,
                                          const InferenceConfig& config);
std::vector<TripEndpoint> infer_dynamic(const std::vector<Snapshot>& stream,
                                        const InferenceConfig& config);
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> match_stationary(
    const std::vector<VehicleRecord>& a, const std::vector<VehicleRecord>& b,
    double buffer_m);

}  // namespace reference

}  // namespace odinfer
