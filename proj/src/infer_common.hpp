#pragma once

// Internals shared by the production (parallel, bucketed) and reference
// (serial, literal) inference implementations, so both agree on stream
// validation, record selection and output ordering.

#include <algorithm>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "odinfer/errors.hpp"
#include "odinfer/inference.hpp"
#include "odinfer/types.hpp"

namespace odinfer::detail {

inline void check_stream(const std::vector<Snapshot>& stream) {
  for (std::size_t i = 1; i < stream.size(); ++i) {
    if (stream[i].captured_at <= stream[i - 1].captured_at) {
      raise(errc::non_monotonic_stream,
            "snapshot " + std::to_string(i) + " captured_at " +
                std::to_string(stream[i].captured_at) + " not after " +
                std::to_string(stream[i - 1].captured_at));
    }
  }
}

inline bool usable(const VehicleRecord& rec, const InferenceConfig& config) {
  if (rec.is_disabled && !config.include_disabled) return false;
  if (rec.is_reserved && !config.include_reserved) return false;
  return true;
}

// One sighting of a vehicle id.
struct Obs {
  std::size_t snap_idx{};
  const VehicleRecord* rec{};
};

// Per-id sighting sequences in snapshot order, as a vector sorted by id so
// parallel loops get a stable unit ordering.
inline std::vector<std::pair<std::string_view, std::vector<Obs>>> group_by_id(
    const std::vector<Snapshot>& stream, const InferenceConfig& config) {
  std::unordered_map<std::string_view, std::vector<Obs>> map;
  for (std::size_t k = 0; k < stream.size(); ++k) {
    for (const auto& rec : stream[k].records) {
      if (!usable(rec, config)) continue;
      map[rec.vehicle_id].push_back({k, &rec});
    }
  }
  std::vector<std::pair<std::string_view, std::vector<Obs>>> out;
  out.reserve(map.size());
  for (auto& [id, obs] : map) out.emplace_back(id, std::move(obs));
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

inline TripEndpoint endpoint_from(EndpointKind kind, const VehicleRecord& rec,
                                  const Snapshot& snap, SourceAlgorithm algo) {
  TripEndpoint e;
  e.kind = kind;
  e.lat = rec.lat;
  e.lon = rec.lon;
  e.at = snap.captured_at;
  e.vendor = snap.feed_id;
  e.source_algorithm = algo;
  return e;
}

inline bool endpoint_less(const TripEndpoint& a, const TripEndpoint& b) {
  return std::tie(a.at, a.kind, a.lat, a.lon, a.vendor) <
         std::tie(b.at, b.kind, b.lat, b.lon, b.vendor);
}

inline bool od_less(const TripOD& a, const TripOD& b) {
  return std::tie(a.origin.at, a.vehicle_id, a.destination.at, a.origin.lat,
                  a.origin.lon) < std::tie(b.origin.at, b.vehicle_id,
                                           b.destination.at, b.origin.lat,
                                           b.origin.lon);
}

// Algorithm-1 core for one id: every over-threshold time gap is a trip.
template <typename Emit>
void static_gaps(std::string_view id, const std::vector<Obs>& obs,
                 const std::vector<Snapshot>& stream, double threshold_s,
                 Emit&& emit) {
  for (std::size_t j = 1; j < obs.size(); ++j) {
    const auto dt = static_cast<double>(obs[j].rec->observed_at -
                                        obs[j - 1].rec->observed_at);
    if (dt > threshold_s) {
      emit(make_trip_od(
          endpoint_from(EndpointKind::Origin, *obs[j - 1].rec,
                        stream[obs[j - 1].snap_idx], SourceAlgorithm::Static),
          endpoint_from(EndpointKind::Destination, *obs[j].rec,
                        stream[obs[j].snap_idx], SourceAlgorithm::Static),
          std::string(id)));
    }
  }
}

// Algorithm-2 core for one id: earliest sighting is a destination, latest
// an origin, save at the stream boundary when configured to drop those.
template <typename Emit>
void resetting_ends(const std::vector<Obs>& obs,
                    const std::vector<Snapshot>& stream,
                    std::size_t last_snap_idx, const InferenceConfig& config,
                    Emit&& emit) {
  if (obs.empty()) return;
  const Obs& first = obs.front();
  const Obs& last = obs.back();
  if (!(config.drop_boundary_endpoints && first.snap_idx == 0)) {
    emit(endpoint_from(EndpointKind::Destination, *first.rec,
                       stream[first.snap_idx], SourceAlgorithm::Resetting));
  }
  if (!(config.drop_boundary_endpoints && last.snap_idx == last_snap_idx)) {
    emit(endpoint_from(EndpointKind::Origin, *last.rec, stream[last.snap_idx],
                       SourceAlgorithm::Resetting));
  }
}

// First step of the dynamic algorithm: records whose id also occurs on the
// other side of the snapshot pair cannot have moved, so they are removed
// outright.
inline std::vector<VehicleRecord> survivors(const Snapshot& self,
                                            const Snapshot& other,
                                            const InferenceConfig& config) {
  std::unordered_map<std::string_view, bool> other_ids;
  other_ids.reserve(other.records.size());
  for (const auto& rec : other.records) {
    if (usable(rec, config)) other_ids.emplace(rec.vehicle_id, true);
  }
  std::vector<VehicleRecord> out;
  for (const auto& rec : self.records) {
    if (usable(rec, config) && !other_ids.count(rec.vehicle_id)) {
      out.push_back(rec);
    }
  }
  return out;
}

}  // namespace odinfer::detail
