// Serial reference implementations, written to mirror the published
// pseudocode as directly as possible. They trade speed for obviousness and
// serve as the oracle the optimized versions are tested against.

#include <algorithm>
#include <iostream>
#include <limits>
#include <map>
#include <string>

#include "infer_common.hpp"
#include "odinfer/inference.hpp"

namespace odinfer::reference {

using detail::endpoint_from;
using detail::endpoint_less;
using detail::od_less;
using detail::Obs;

namespace {

// std::map keeps ids sorted, giving the same unit order as the production
// grouping without a separate sort.
std::map<std::string, std::vector<Obs>> group_by_id_sorted(
    const std::vector<Snapshot>& stream, const InferenceConfig& config) {
  std::map<std::string, std::vector<Obs>> groups;
  for (std::size_t k = 0; k < stream.size(); ++k) {
    for (const auto& rec : stream[k].records) {
      if (detail::usable(rec, config)) {
        groups[rec.vehicle_id].push_back({k, &rec});
      }
    }
  }
  return groups;
}

}  // namespace

std::vector<TripOD> infer_static(const std::vector<Snapshot>& stream,
                                 const InferenceConfig& config) {
  config.validate();
  if (stream.empty()) {
    std::cerr << "[infer] warning: reference infer_static on empty stream\n";
    return {};
  }
  detail::check_stream(stream);
  std::vector<TripOD> trips;
  for (const auto& [id, obs] : group_by_id_sorted(stream, config)) {
    detail::static_gaps(id, obs, stream, config.gap_threshold_s(),
                        [&](TripOD t) { trips.push_back(std::move(t)); });
  }
  std::sort(trips.begin(), trips.end(), od_less);
  return trips;
}

std::vector<TripEndpoint> infer_resetting(const std::vector<Snapshot>& stream,
                                          const InferenceConfig& config) {
  config.validate();
  if (stream.empty()) {
    std::cerr << "[infer] warning: reference infer_resetting on empty stream\n";
    return {};
  }
  detail::check_stream(stream);
  std::vector<TripEndpoint> endpoints;
  for (const auto& [id, obs] : group_by_id_sorted(stream, config)) {
    detail::resetting_ends(obs, stream, stream.size() - 1, config,
                           [&](TripEndpoint e) { endpoints.push_back(std::move(e)); });
  }
  std::sort(endpoints.begin(), endpoints.end(), endpoint_less);
  return endpoints;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> match_stationary(
    const std::vector<VehicleRecord>& a, const std::vector<VehicleRecord>& b,
    double buffer_m) {
  // Full pairwise distance matrix with repeated global-minimum extraction,
  // ties broken by (row, column). O(k^3) worst case and proud of it.
  std::vector<std::vector<double>> dist(a.size(), std::vector<double>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      dist[i][j] = geo_distance(a[i].pos(), b[j].pos());
    }
  }
  std::vector<char> used_a(a.size(), 0);
  std::vector<char> used_b(b.size(), 0);
  while (true) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    bool found = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (used_a[i]) continue;
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (used_b[j]) continue;
        if (dist[i][j] < best) {
          best = dist[i][j];
          bi = i;
          bj = j;
          found = true;
        }
      }
    }
    if (!found || best > buffer_m) break;
    used_a[bi] = 1;
    used_b[bj] = 1;
  }
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> unmatched;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!used_a[i]) unmatched.first.push_back(i);
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (!used_b[j]) unmatched.second.push_back(j);
  }
  return unmatched;
}

std::vector<TripEndpoint> infer_dynamic(const std::vector<Snapshot>& stream,
                                        const InferenceConfig& config) {
  config.validate();
  if (stream.empty()) {
    std::cerr << "[infer] warning: reference infer_dynamic on empty stream\n";
    return {};
  }
  detail::check_stream(stream);
  std::vector<TripEndpoint> endpoints;
  for (std::size_t k = 0; k + 1 < stream.size(); ++k) {
    const Snapshot& prev = stream[k];
    const Snapshot& next = stream[k + 1];
    const auto a = detail::survivors(prev, next, config);
    const auto b = detail::survivors(next, prev, config);
    const auto [ua, ub] = reference::match_stationary(a, b, config.buffer_m);
    for (std::size_t i : ua) {
      endpoints.push_back(
          endpoint_from(EndpointKind::Origin, a[i], prev, SourceAlgorithm::Dynamic));
    }
    for (std::size_t j : ub) {
      endpoints.push_back(endpoint_from(EndpointKind::Destination, b[j], next,
                                        SourceAlgorithm::Dynamic));
    }
  }
  std::sort(endpoints.begin(), endpoints.end(), endpoint_less);
  return endpoints;
}

}  // namespace odinfer::reference
