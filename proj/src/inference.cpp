#include "odinfer/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <unordered_set>

#include "infer_common.hpp"
#include "odinfer/text.hpp"

namespace odinfer {

using detail::endpoint_from;
using detail::endpoint_less;
using detail::od_less;

namespace {

void warn_empty(const char* op) {
  std::cerr << "[infer] warning: " << op << " called on an empty stream\n";
}

}  // namespace

const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::Duration: return "duration";
    case RejectReason::MaxSpeed: return "max_speed";
    case RejectReason::MinSpeed: return "min_speed";
  }
  return "unknown";
}

void FilterConfig::validate() const {
  if (!(max_duration_s > 0)) {
    raise(errc::invalid_config, "filter max_duration_s must be > 0");
  }
  if (!(min_speed_ms > 0) || !(max_speed_ms > min_speed_ms)) {
    raise(errc::invalid_config,
          "filter speeds need max_speed_ms > min_speed_ms > 0");
  }
}

void InferenceConfig::validate() const {
  if (!(scrape_interval_s > 0)) {
    raise(errc::invalid_config, "scrape_interval_s must be > 0");
  }
  if (!(gap_factor >= 1.0)) {
    raise(errc::invalid_config, "gap_factor must be >= 1");
  }
  if (!(buffer_m >= 0.0)) {
    raise(errc::invalid_config, "buffer_m must be >= 0");
  }
  filter.validate();
}

InferenceConfig InferenceConfig::from_kv(const KvConfig& kv) {
  InferenceConfig c;
  c.scrape_interval_s = kv.get_double("scrape_interval_s", c.scrape_interval_s);
  c.gap_factor = kv.get_double("gap_factor", c.gap_factor);
  c.buffer_m = kv.get_double("buffer_m", c.buffer_m);
  c.drop_boundary_endpoints =
      kv.get_bool("drop_boundary_endpoints", c.drop_boundary_endpoints);
  c.include_disabled = kv.get_bool("include_disabled", c.include_disabled);
  c.include_reserved = kv.get_bool("include_reserved", c.include_reserved);
  c.filter.max_duration_s =
      kv.get_double("max_trip_duration_s", c.filter.max_duration_s);
  c.filter.max_speed_ms = kv.get_double("max_speed_ms", c.filter.max_speed_ms);
  c.filter.min_speed_ms = kv.get_double("min_speed_ms", c.filter.min_speed_ms);
  c.validate();
  return c;
}

std::vector<TripOD> infer_static(const std::vector<Snapshot>& stream,
                                 const InferenceConfig& config) {
  config.validate();
  if (stream.empty()) {
    warn_empty("infer_static");
    return {};
  }
  detail::check_stream(stream);
  const auto groups = detail::group_by_id(stream, config);
  const double threshold = config.gap_threshold_s();

  std::vector<std::vector<TripOD>> per_group(groups.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t g = 0; g < static_cast<std::int64_t>(groups.size()); ++g) {
    auto& out = per_group[static_cast<std::size_t>(g)];
    const auto& [id, obs] = groups[static_cast<std::size_t>(g)];
    detail::static_gaps(id, obs, stream, threshold,
                        [&](TripOD trip) { out.push_back(std::move(trip)); });
  }

  std::vector<TripOD> trips;
  for (auto& part : per_group) {
    trips.insert(trips.end(), std::make_move_iterator(part.begin()),
                 std::make_move_iterator(part.end()));
  }
  std::sort(trips.begin(), trips.end(), od_less);
  return trips;
}

std::vector<TripEndpoint> infer_resetting(const std::vector<Snapshot>& stream,
                                          const InferenceConfig& config) {
  config.validate();
  if (stream.empty()) {
    warn_empty("infer_resetting");
    return {};
  }
  detail::check_stream(stream);
  const auto groups = detail::group_by_id(stream, config);
  const std::size_t last_idx = stream.size() - 1;

  std::vector<std::vector<TripEndpoint>> per_group(groups.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t g = 0; g < static_cast<std::int64_t>(groups.size()); ++g) {
    auto& out = per_group[static_cast<std::size_t>(g)];
    detail::resetting_ends(groups[static_cast<std::size_t>(g)].second, stream,
                           last_idx, config,
                           [&](TripEndpoint e) { out.push_back(std::move(e)); });
  }

  std::vector<TripEndpoint> endpoints;
  for (auto& part : per_group) {
    endpoints.insert(endpoints.end(), std::make_move_iterator(part.begin()),
                     std::make_move_iterator(part.end()));
  }
  std::sort(endpoints.begin(), endpoints.end(), endpoint_less);
  return endpoints;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> match_stationary(
    const std::vector<VehicleRecord>& a, const std::vector<VehicleRecord>& b,
    double buffer_m) {
  std::vector<char> used_a(a.size(), 0);
  std::vector<char> used_b(b.size(), 0);
  if (!a.empty() && !b.empty()) {
    // Only pairs within the buffer can ever match, so it suffices to score
    // candidates from a degree-space grid of cell size >= the buffer. The
    // longitude cell uses the most compressed cosine over the data, which
    // keeps the 3x3 neighborhood a strict superset of all in-buffer pairs.
    double max_abs_lat = 0.0;
    for (const auto& r : a) max_abs_lat = std::max(max_abs_lat, std::abs(r.lat));
    for (const auto& r : b) max_abs_lat = std::max(max_abs_lat, std::abs(r.lat));
    const double cos_min = std::cos(deg2rad(std::min(max_abs_lat, 89.9)));

    const double cell_lat = std::max(buffer_m, 1e-9) / kMetersPerDegLat;
    const double cell_lon = cell_lat / std::max(cos_min, 1e-6);
    auto key = [&](const VehicleRecord& r) {
      return std::pair<std::int64_t, std::int64_t>{
          static_cast<std::int64_t>(std::floor(r.lat / cell_lat)),
          static_cast<std::int64_t>(std::floor(r.lon / cell_lon))};
    };

    std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>>
        buckets;
    for (std::size_t j = 0; j < b.size(); ++j) buckets[key(b[j])].push_back(j);

    struct Cand {
      double d;
      std::size_t i, j;
    };
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto [ki, kj] = key(a[i]);
      for (std::int64_t di = -1; di <= 1; ++di) {
        for (std::int64_t dj = -1; dj <= 1; ++dj) {
          auto it = buckets.find({ki + di, kj + dj});
          if (it == buckets.end()) continue;
          for (std::size_t j : it->second) {
            const double d = geo_distance(a[i].pos(), b[j].pos());
            if (d <= buffer_m) cands.push_back({d, i, j});
          }
        }
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
      return std::tie(x.d, x.i, x.j) < std::tie(y.d, y.i, y.j);
    });
    // Scanning candidates in (distance, i, j) order and taking every pair
    // whose records are both free is exactly repeated global-minimum
    // extraction with the same tie-break.
    for (const auto& c : cands) {
      if (!used_a[c.i] && !used_b[c.j]) {
        used_a[c.i] = 1;
        used_b[c.j] = 1;
      }
    }
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
    warn_empty("infer_dynamic");
    return {};
  }
  detail::check_stream(stream);
  if (stream.size() < 2) return {};

  const std::size_t n_intervals = stream.size() - 1;
  std::vector<std::vector<TripEndpoint>> per_interval(n_intervals);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(n_intervals); ++k) {
    const Snapshot& prev = stream[static_cast<std::size_t>(k)];
    const Snapshot& next = stream[static_cast<std::size_t>(k) + 1];
    const auto a = detail::survivors(prev, next, config);
    const auto b = detail::survivors(next, prev, config);
    const auto [ua, ub] = match_stationary(a, b, config.buffer_m);
    auto& out = per_interval[static_cast<std::size_t>(k)];
    for (std::size_t i : ua) {
      out.push_back(
          endpoint_from(EndpointKind::Origin, a[i], prev, SourceAlgorithm::Dynamic));
    }
    for (std::size_t j : ub) {
      out.push_back(endpoint_from(EndpointKind::Destination, b[j], next,
                                  SourceAlgorithm::Dynamic));
    }
  }

  std::vector<TripEndpoint> endpoints;
  for (auto& part : per_interval) {
    endpoints.insert(endpoints.end(), std::make_move_iterator(part.begin()),
                     std::make_move_iterator(part.end()));
  }
  std::sort(endpoints.begin(), endpoints.end(), endpoint_less);
  return endpoints;
}

FilterResult filter_trips(const std::vector<TripOD>& trips,
                          const FilterConfig& filter) {
  filter.validate();
  FilterResult result;
  for (const auto& trip : trips) {
    if (static_cast<double>(trip.duration_s) > filter.max_duration_s) {
      result.rejected.push_back({trip, RejectReason::Duration});
    } else if (trip.average_speed_ms > filter.max_speed_ms) {
      result.rejected.push_back({trip, RejectReason::MaxSpeed});
    } else if (trip.average_speed_ms < filter.min_speed_ms) {
      result.rejected.push_back({trip, RejectReason::MinSpeed});
    } else {
      result.kept.push_back(trip);
    }
  }
  return result;
}

std::vector<TripEndpoint> od_to_endpoints(const std::vector<TripOD>& trips) {
  std::vector<TripEndpoint> endpoints;
  endpoints.reserve(trips.size() * 2);
  for (const auto& trip : trips) {
    endpoints.push_back(trip.origin);
    endpoints.push_back(trip.destination);
  }
  std::sort(endpoints.begin(), endpoints.end(), endpoint_less);
  return endpoints;
}

void write_endpoints_csv(const std::filesystem::path& path,
                         const std::vector<TripEndpoint>& endpoints) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(errc::storage_io, "cannot open " + path.string() + " for write");
  out << "kind,lat,lon,t,vendor,algorithm\n";
  for (const auto& e : endpoints) {
    out << to_string(e.kind) << ',' << dtos(e.lat) << ',' << dtos(e.lon) << ','
        << e.at << ',' << e.vendor << ',' << to_string(e.source_algorithm)
        << '\n';
  }
  if (!out.flush()) raise(errc::storage_io, "short write to " + path.string());
}

std::vector<TripEndpoint> read_endpoints_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::storage_io, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("kind,")) {
    raise(errc::corrupt_record, path.string() + " is not an endpoints CSV");
  }
  std::vector<TripEndpoint> endpoints;
  std::int64_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = split_csv(line);
    if (f.size() != 6) {
      raise(errc::corrupt_record, path.string() + ":" + std::to_string(lineno) +
                                      ": expected 6 fields");
    }
    TripEndpoint e;
    e.kind = endpoint_kind_from(f[0]);
    e.lat = parse_double_field(f[1], "lat");
    e.lon = parse_double_field(f[2], "lon");
    e.at = parse_int_field(f[3], "t");
    e.vendor = std::string(f[4]);
    e.source_algorithm = algorithm_from(f[5]);
    endpoints.push_back(std::move(e));
  }
  return endpoints;
}

void write_od_csv(const std::filesystem::path& path,
                  const std::vector<TripOD>& trips) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(errc::storage_io, "cannot open " + path.string() + " for write");
  out << "o_lat,o_lon,o_t,d_lat,d_lon,d_t,vehicle_id,duration_s,distance_m,"
         "speed_ms\n";
  for (const auto& t : trips) {
    out << dtos(t.origin.lat) << ',' << dtos(t.origin.lon) << ',' << t.origin.at
        << ',' << dtos(t.destination.lat) << ',' << dtos(t.destination.lon)
        << ',' << t.destination.at << ',' << t.vehicle_id << ',' << t.duration_s
        << ',' << dtos(t.straight_line_distance_m) << ','
        << dtos(t.average_speed_ms) << '\n';
  }
  if (!out.flush()) raise(errc::storage_io, "short write to " + path.string());
}

std::vector<TripOD> read_od_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::storage_io, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("o_lat,")) {
    raise(errc::corrupt_record, path.string() + " is not an OD CSV");
  }
  std::vector<TripOD> trips;
  std::int64_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = split_csv(line);
    if (f.size() != 10) {
      raise(errc::corrupt_record, path.string() + ":" + std::to_string(lineno) +
                                      ": expected 10 fields");
    }
    TripOD t;
    t.origin.kind = EndpointKind::Origin;
    t.origin.source_algorithm = SourceAlgorithm::Static;
    t.origin.lat = parse_double_field(f[0], "o_lat");
    t.origin.lon = parse_double_field(f[1], "o_lon");
    t.origin.at = parse_int_field(f[2], "o_t");
    t.destination.kind = EndpointKind::Destination;
    t.destination.source_algorithm = SourceAlgorithm::Static;
    t.destination.lat = parse_double_field(f[3], "d_lat");
    t.destination.lon = parse_double_field(f[4], "d_lon");
    t.destination.at = parse_int_field(f[5], "d_t");
    t.vehicle_id = std::string(f[6]);
    t.duration_s = parse_int_field(f[7], "duration_s");
    t.straight_line_distance_m = parse_double_field(f[8], "distance_m");
    t.average_speed_ms = parse_double_field(f[9], "speed_ms");
    trips.push_back(std::move(t));
  }
  return trips;
}

}  // namespace odinfer
