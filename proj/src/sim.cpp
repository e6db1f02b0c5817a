#include "odinfer/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>

#include "odinfer/rng.hpp"
#include "odinfer/text.hpp"

namespace odinfer {
namespace {

// RNG stream tags. Each independent random quantity hangs off its own
// (seed, tag, ...) key so that adding draws to one stream never perturbs
// another — in particular the world is identical across id strategies.
constexpr std::uint64_t kTagPlace = 1;     // placement + trip geometry
constexpr std::uint64_t kTagSchedule = 2;  // per-vehicle rider trip windows
constexpr std::uint64_t kTagNoise = 3;     // per (vehicle, snapshot) GPS jitter
constexpr std::uint64_t kTagResetId = 4;   // resetting ids, per (vehicle, run)
constexpr std::uint64_t kTagDynId = 5;     // dynamic ids, per (vehicle, epoch)
constexpr std::uint64_t kTagOps = 6;       // operator move schedule + picks
constexpr std::uint64_t kTagLaunch = 7;
constexpr std::uint64_t kTagRemoval = 8;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

// A reserved movement slot; positions are resolved later, so windows can be
// scheduled before anyone knows where the vehicle will be at that time.
struct Window {
  std::int64_t start{};
  std::int64_t end{};
  TripKind kind = TripKind::Rider;
  bool vanish = true;
  double speed{};            // m/s; trip length = speed * (end - start)
  std::uint64_t geom_key{};  // rng stream for destination sampling
};

struct Vehicle {
  std::int64_t ordinal{};  // the stable true identity
  std::string static_id;
  std::int64_t appear_t{};
  std::optional<std::int64_t> remove_t;
  GeoPoint initial_pos;
  std::vector<Window> windows;          // sorted by start, non-overlapping
  std::vector<GroundTruthTrip> trips;   // realized movements, sorted
};

struct EmitParams {
  std::string feed_id;
  std::int64_t start_time{};
  std::int64_t horizon_s{};
  std::int64_t snapshot_interval_s{};
  IdStrategy id_strategy = IdStrategy::Static;
  std::int64_t dynamic_reset_interval_s = 1800;
  double gps_noise_sigma_m = 0.0;
  std::uint64_t rng_seed = 1;
};

double sample_trip_duration(std::mt19937_64& eng, const SimConfig& c) {
  const double z = next_normal(eng);
  const double raw = c.trip_duration_median_s * std::exp(c.trip_duration_sigma * z);
  return std::clamp(raw, c.trip_duration_min_s, c.trip_duration_max_s);
}

// Draws an endpoint from the demand mixture: a uniform base layer of weight
// 1 plus the configured Gaussian hotspots. Hotspot draws falling outside
// the bbox are re-drawn a few times, then clamped.
GeoPoint sample_endpoint(std::mt19937_64& eng, const BBox& box,
                         const std::vector<Hotspot>& hotspots) {
  double total = 1.0;
  for (const auto& h : hotspots) total += h.weight;
  double pick = next_uniform(eng, 0.0, total);
  if (pick <= 1.0 || hotspots.empty()) {
    return {next_uniform(eng, box.lat_min, box.lat_max),
            next_uniform(eng, box.lon_min, box.lon_max)};
  }
  pick -= 1.0;
  const Hotspot* chosen = &hotspots.back();
  for (const auto& h : hotspots) {
    if (pick < h.weight) {
      chosen = &h;
      break;
    }
    pick -= h.weight;
  }
  const double cos_c = std::cos(deg2rad(chosen->center.lat));
  for (int attempt = 0; attempt < 16; ++attempt) {
    const double dy = chosen->radius_m * next_normal(eng);
    const double dx = chosen->radius_m * next_normal(eng);
    GeoPoint p{chosen->center.lat + dy / kMetersPerDegLat,
               chosen->center.lon + dx / (kMetersPerDegLat * cos_c)};
    if (box.contains(p)) return p;
  }
  GeoPoint p = chosen->center;
  p.lat = std::clamp(p.lat, box.lat_min, box.lat_max);
  p.lon = std::clamp(p.lon, box.lon_min, box.lon_max);
  return p;
}

// Picks a trip destination exactly `distance_m` from `from`, heading toward
// a demand-mixture target so endpoint density follows the hotspots. Returns
// nullopt when no sampled heading keeps the endpoint inside the bbox.
std::optional<GeoPoint> walk_destination(std::mt19937_64& eng, GeoPoint from,
                                         double distance_m, const BBox& box,
                                         const std::vector<Hotspot>& hotspots) {
  const LocalProjection proj({box.mid_lat(), box.mid_lon()}, box.mid_lat());
  const XY origin = proj.to_xy(from);
  for (int attempt = 0; attempt < 64; ++attempt) {
    const GeoPoint target = sample_endpoint(eng, box, hotspots);
    const XY t = proj.to_xy(target);
    const double norm = std::hypot(t.x - origin.x, t.y - origin.y);
    if (norm < 1.0) continue;  // target on top of us; direction undefined
    const XY end{origin.x + distance_m * (t.x - origin.x) / norm,
                 origin.y + distance_m * (t.y - origin.y) / norm};
    const GeoPoint p = proj.to_geo(end);
    if (box.contains(p)) return p;
  }
  return std::nullopt;
}

// Resolves window destinations into realized trips, chaining each vehicle's
// position through its movements in time order.
void realize_trips(Vehicle& v, const SimConfig& c) {
  GeoPoint pos = v.initial_pos;
  for (const auto& w : v.windows) {
    auto eng = seeded_engine(w.geom_key);
    const double distance = w.speed * static_cast<double>(w.end - w.start);
    auto dest = walk_destination(eng, pos, distance, c.bbox, c.hotspots);
    if (!dest) continue;  // heading never fit the bbox; vehicle stays put
    GroundTruthTrip trip;
    trip.true_vehicle = v.ordinal;
    trip.origin = pos;
    trip.origin_t = w.start;
    trip.destination = *dest;
    trip.destination_t = w.end;
    trip.kind = w.kind;
    // Teleport-mode operator moves keep the scooter listed; encode that in
    // the realized trip so emission knows not to blank it out.
    v.trips.push_back(trip);
    pos = *dest;
  }
}

// Emission needs to know which realized trips hide the vehicle; rider trips
// always do, operator moves only in vanish mode. Kept parallel to v.trips.
std::vector<std::uint8_t> vanish_flags(const Vehicle& v,
                                       const std::vector<Window>& windows) {
  std::vector<std::uint8_t> flags;
  flags.reserve(v.trips.size());
  std::size_t wi = 0;
  for (const auto& t : v.trips) {
    while (wi < windows.size() && windows[wi].start != t.origin_t) ++wi;
    flags.push_back(wi < windows.size() ? windows[wi].vanish : 1);
  }
  return flags;
}

std::vector<Snapshot> emit_stream(std::vector<Vehicle>& vehicles,
                                  const std::vector<std::vector<std::uint8_t>>& vanish,
                                  const EmitParams& p) {
  const std::int64_t n_snapshots = p.horizon_s / p.snapshot_interval_s;
  std::vector<Snapshot> out;
  out.reserve(static_cast<std::size_t>(n_snapshots));

  struct Cursor {
    std::size_t next_trip = 0;   // first trip not yet completed
    std::int64_t runs = 0;       // completed vanish-trips, keys resetting ids
    GeoPoint pos;
  };
  std::vector<Cursor> cursors(vehicles.size());
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    cursors[i].pos = vehicles[i].initial_pos;
  }

  std::string id;
  for (std::int64_t k = 0; k < n_snapshots; ++k) {
    const std::int64_t t = p.start_time + k * p.snapshot_interval_s;
    Snapshot snap;
    snap.feed_id = p.feed_id;
    snap.captured_at = t;
    snap.ttl = p.snapshot_interval_s;
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
      const Vehicle& v = vehicles[i];
      Cursor& cur = cursors[i];
      while (cur.next_trip < v.trips.size() &&
             v.trips[cur.next_trip].destination_t <= t) {
        cur.pos = v.trips[cur.next_trip].destination;
        if (vanish[i][cur.next_trip]) ++cur.runs;
        ++cur.next_trip;
      }
      if (t < v.appear_t) continue;
      if (v.remove_t && t >= *v.remove_t) continue;
      const bool mid_trip = cur.next_trip < v.trips.size() &&
                            v.trips[cur.next_trip].origin_t < t;
      if (mid_trip && vanish[i][cur.next_trip]) continue;  // out riding

      switch (p.id_strategy) {
        case IdStrategy::Static:
          id = v.static_id;
          break;
        case IdStrategy::Resetting:
          id = uuid_for(mix(p.rng_seed, kTagResetId,
                            static_cast<std::uint64_t>(v.ordinal),
                            static_cast<std::uint64_t>(cur.runs)));
          break;
        case IdStrategy::Dynamic:
          id = uuid_for(mix(p.rng_seed, kTagDynId,
                            static_cast<std::uint64_t>(v.ordinal),
                            static_cast<std::uint64_t>(
                                floor_div(t, p.dynamic_reset_interval_s))));
          break;
      }

      double lat = cur.pos.lat;
      double lon = cur.pos.lon;
      if (p.gps_noise_sigma_m > 0.0) {
        const std::uint64_t h = mix(p.rng_seed, kTagNoise,
                                    static_cast<std::uint64_t>(v.ordinal),
                                    static_cast<std::uint64_t>(k));
        double u1 = u01(h);
        const double u2 = u01(splitmix64(h ^ 0x9e3779b97f4a7c15ULL));
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double r = p.gps_noise_sigma_m * std::sqrt(-2.0 * std::log(u1));
        const double east = r * std::cos(2.0 * kPi * u2);
        const double north = r * std::sin(2.0 * kPi * u2);
        lat += north / kMetersPerDegLat;
        lon += east / (kMetersPerDegLat * std::cos(deg2rad(cur.pos.lat)));
      }
      snap.records.push_back({id, lat, lon, 0, 0, t});
    }
    out.push_back(std::move(snap));
  }
  return out;
}

SimResult collect(std::vector<Vehicle>& vehicles, const EmitParams& params) {
  std::vector<std::vector<std::uint8_t>> vanish;
  vanish.reserve(vehicles.size());
  for (const auto& v : vehicles) vanish.push_back(vanish_flags(v, v.windows));

  SimResult result;
  result.snapshots = emit_stream(vehicles, vanish, params);
  for (const auto& v : vehicles) {
    result.trips.insert(result.trips.end(), v.trips.begin(), v.trips.end());
    result.roster.push_back({v.ordinal, v.appear_t, v.remove_t});
    if (v.appear_t > params.start_time) ++result.vehicles_launched;
    if (v.remove_t) ++result.vehicles_removed;
  }
  std::stable_sort(result.trips.begin(), result.trips.end(),
                   [](const GroundTruthTrip& a, const GroundTruthTrip& b) {
                     if (a.origin_t != b.origin_t) return a.origin_t < b.origin_t;
                     return a.true_vehicle < b.true_vehicle;
                   });
  return result;
}

// Fleet-wide Poisson event times over [start, end), as integer seconds.
std::vector<std::int64_t> poisson_times(std::uint64_t key, double rate_per_s,
                                        std::int64_t start, std::int64_t end) {
  std::vector<std::int64_t> out;
  if (rate_per_s <= 0.0) return out;
  auto eng = seeded_engine(key);
  double t = static_cast<double>(start);
  while (true) {
    t += next_exponential(eng, 1.0 / rate_per_s);
    if (t >= static_cast<double>(end)) return out;
    out.push_back(static_cast<std::int64_t>(std::llround(t)));
  }
}

bool window_free(const Vehicle& v, std::int64_t start, std::int64_t end,
                 double gap) {
  const auto g = static_cast<std::int64_t>(gap);
  for (const auto& w : v.windows) {
    if (w.start - g < end && start < w.end + g) return false;
  }
  return true;
}

std::vector<double> parse_tuple(const std::string& raw, std::size_t arity,
                                const std::string& what) {
  std::vector<double> vals;
  for (auto field : split_csv(raw)) {
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    vals.push_back(parse_double_field(field, what));
  }
  if (vals.size() != arity) {
    raise(errc::invalid_config, what + " needs " + std::to_string(arity) +
                                    " comma-separated values, got '" + raw + "'");
  }
  return vals;
}

}  // namespace

const char* to_string(TripKind k) {
  switch (k) {
    case TripKind::Rider: return "rider";
    case TripKind::Rebalancing: return "rebalancing";
    case TripKind::Juicing: return "juicing";
  }
  return "unknown";
}

TripKind trip_kind_from(std::string_view s) {
  if (s == "rider") return TripKind::Rider;
  if (s == "rebalancing") return TripKind::Rebalancing;
  if (s == "juicing") return TripKind::Juicing;
  raise(errc::corrupt_record, "unknown trip kind '" + std::string(s) + "'");
}

IdStrategy id_strategy_from(std::string_view s) {
  if (s == "static") return IdStrategy::Static;
  if (s == "resetting") return IdStrategy::Resetting;
  if (s == "dynamic") return IdStrategy::Dynamic;
  raise(errc::invalid_config, "unknown id strategy '" + std::string(s) + "'");
}

void SimConfig::validate() const {
  if (feed_id.empty()) raise(errc::invalid_config, "feed_id must not be empty");
  if (bbox.is_empty() || !valid_wgs84({bbox.lat_min, bbox.lon_min}) ||
      !valid_wgs84({bbox.lat_max, bbox.lon_max})) {
    raise(errc::invalid_config, "bbox is empty or outside WGS84 bounds");
  }
  if (fleet_size < 0) raise(errc::invalid_config, "fleet_size must be >= 0");
  if (horizon_s <= 0) raise(errc::invalid_config, "horizon_s must be > 0");
  if (snapshot_interval_s <= 0) {
    raise(errc::invalid_config, "snapshot_interval_s must be > 0");
  }
  for (auto [value, name] : {std::pair{trip_rate_per_hour, "trip_rate_per_hour"},
                             {rebalancing_rate_per_hour, "rebalancing_rate_per_hour"},
                             {juicing_rate_per_hour, "juicing_rate_per_hour"},
                             {launch_rate_per_day, "launch_rate_per_day"},
                             {removal_rate_per_day, "removal_rate_per_day"},
                             {gps_noise_sigma_m, "gps_noise_sigma_m"},
                             {min_idle_gap_s, "min_idle_gap_s"}}) {
    if (!(value >= 0.0)) {
      raise(errc::invalid_config, std::string(name) + " must be >= 0");
    }
  }
  if (!(trip_duration_median_s > 0) || !(trip_duration_sigma >= 0)) {
    raise(errc::invalid_config, "trip duration distribution malformed");
  }
  if (!(trip_duration_min_s > 0) || trip_duration_min_s > trip_duration_max_s) {
    raise(errc::invalid_config, "trip duration bounds malformed");
  }
  if (!(trip_speed_min_ms > 0) || trip_speed_min_ms > trip_speed_max_ms) {
    raise(errc::invalid_config, "trip speed bounds malformed");
  }
  if (id_strategy == IdStrategy::Dynamic &&
      dynamic_reset_interval_s <= snapshot_interval_s) {
    raise(errc::invalid_config,
          "dynamic_reset_interval_s must exceed snapshot_interval_s");
  }
  for (const auto& h : hotspots) {
    if (!valid_wgs84(h.center) || !(h.weight >= 0) || !(h.radius_m > 0)) {
      raise(errc::invalid_config, "hotspot malformed");
    }
  }
}

SimConfig SimConfig::from_kv(const KvConfig& kv) {
  SimConfig c;
  c.feed_id = kv.get_str("feed_id", c.feed_id);
  if (kv.has("bbox")) {
    auto v = kv.get_doubles("bbox");
    if (v.size() != 4) {
      raise(errc::invalid_config, "bbox needs lat_min,lon_min,lat_max,lon_max");
    }
    c.bbox = {v[0], v[1], v[2], v[3]};
  }
  c.fleet_size = kv.get_int("fleet_size", c.fleet_size);
  c.start_time = kv.get_int("start_time", c.start_time);
  c.horizon_s = kv.get_int("horizon_s", c.horizon_s);
  c.snapshot_interval_s = kv.get_int("snapshot_interval_s", c.snapshot_interval_s);
  c.trip_rate_per_hour = kv.get_double("trip_rate_per_hour", c.trip_rate_per_hour);
  c.trip_duration_median_s =
      kv.get_double("trip_duration_median_s", c.trip_duration_median_s);
  c.trip_duration_sigma = kv.get_double("trip_duration_sigma", c.trip_duration_sigma);
  c.trip_duration_min_s = kv.get_double("trip_duration_min_s", c.trip_duration_min_s);
  c.trip_duration_max_s = kv.get_double("trip_duration_max_s", c.trip_duration_max_s);
  c.trip_speed_min_ms = kv.get_double("trip_speed_min_ms", c.trip_speed_min_ms);
  c.trip_speed_max_ms = kv.get_double("trip_speed_max_ms", c.trip_speed_max_ms);
  c.gps_noise_sigma_m = kv.get_double("gps_noise_sigma_m", c.gps_noise_sigma_m);
  c.rebalancing_rate_per_hour =
      kv.get_double("rebalancing_rate_per_hour", c.rebalancing_rate_per_hour);
  c.juicing_rate_per_hour =
      kv.get_double("juicing_rate_per_hour", c.juicing_rate_per_hour);
  c.launch_rate_per_day = kv.get_double("launch_rate_per_day", c.launch_rate_per_day);
  c.removal_rate_per_day =
      kv.get_double("removal_rate_per_day", c.removal_rate_per_day);
  c.id_strategy = id_strategy_from(kv.get_str("id_strategy", "static"));
  c.dynamic_reset_interval_s =
      kv.get_int("dynamic_reset_interval_s", c.dynamic_reset_interval_s);
  const auto mode = kv.get_str("operator_move_mode", "vanish");
  if (mode == "vanish") {
    c.operator_move_mode = OperatorMoveMode::Vanish;
  } else if (mode == "teleport") {
    c.operator_move_mode = OperatorMoveMode::Teleport;
  } else {
    raise(errc::invalid_config, "operator_move_mode must be vanish|teleport");
  }
  c.min_idle_gap_s = kv.get_double("min_idle_gap_s", c.min_idle_gap_s);
  c.rng_seed = static_cast<std::uint64_t>(kv.get_int("rng_seed", 1));
  for (const auto& [key, value] : kv.with_prefix("hotspot.")) {
    auto v = parse_tuple(value, 4, "hotspot." + key);
    c.hotspots.push_back({{v[0], v[1]}, v[2], v[3]});
  }
  c.validate();
  return c;
}

SimResult simulate(const SimConfig& config) {
  config.validate();
  const std::int64_t horizon_end = config.start_time + config.horizon_s;
  const double gap = config.min_idle_gap_s;

  // Fleet roster: the initial vehicles plus Poisson launches.
  std::vector<Vehicle> fleet;
  for (std::int64_t i = 0; i < config.fleet_size; ++i) {
    Vehicle v;
    v.ordinal = i;
    v.appear_t = config.start_time;
    fleet.push_back(std::move(v));
  }
  for (std::int64_t t : poisson_times(mix(config.rng_seed, kTagLaunch),
                                      config.launch_rate_per_day / 86400.0,
                                      config.start_time, horizon_end)) {
    Vehicle v;
    v.ordinal = static_cast<std::int64_t>(fleet.size());
    v.appear_t = t;
    fleet.push_back(std::move(v));
  }
  for (auto& v : fleet) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "v%05lld", static_cast<long long>(v.ordinal));
    v.static_id = buf;
  }

  // Rider trip windows, independently per vehicle.
  if (config.trip_rate_per_hour > 0.0) {
    const double mean_gap_s = 3600.0 / config.trip_rate_per_hour;
    for (auto& v : fleet) {
      auto eng = seeded_engine(mix(config.rng_seed, kTagSchedule,
                                   static_cast<std::uint64_t>(v.ordinal)));
      std::uint64_t trip_no = 0;
      double cursor = static_cast<double>(v.appear_t) + gap +
                      next_exponential(eng, mean_gap_s);
      while (cursor < static_cast<double>(horizon_end)) {
        const double duration = sample_trip_duration(eng, config);
        const double speed =
            next_uniform(eng, config.trip_speed_min_ms, config.trip_speed_max_ms);
        const auto start = static_cast<std::int64_t>(std::llround(cursor));
        const auto end =
            start + std::max<std::int64_t>(1, std::llround(duration));
        if (static_cast<double>(end) + gap <= static_cast<double>(horizon_end)) {
          v.windows.push_back(
              {start, end, TripKind::Rider, true, speed,
               mix(config.rng_seed, kTagPlace,
                   static_cast<std::uint64_t>(v.ordinal), trip_no++)});
          cursor = static_cast<double>(end) + gap + next_exponential(eng, mean_gap_s);
        } else {
          cursor += next_exponential(eng, mean_gap_s);
        }
      }
    }
  }

  // Removals: each event retires one currently-idle vehicle for good,
  // dropping whatever it had scheduled afterwards.
  {
    auto removal_times = poisson_times(mix(config.rng_seed, kTagRemoval),
                                       config.removal_rate_per_day / 86400.0,
                                       config.start_time, horizon_end);
    auto pick_eng = seeded_engine(mix(config.rng_seed, kTagRemoval, 1));
    for (std::int64_t rt : removal_times) {
      std::vector<std::size_t> candidates;
      for (std::size_t i = 0; i < fleet.size(); ++i) {
        const Vehicle& v = fleet[i];
        if (v.remove_t || v.appear_t + static_cast<std::int64_t>(gap) > rt) continue;
        if (!window_free(v, rt, rt, gap)) continue;
        candidates.push_back(i);
      }
      if (candidates.empty()) continue;
      Vehicle& v = fleet[candidates[pick_eng() % candidates.size()]];
      v.remove_t = rt;
      std::erase_if(v.windows, [rt](const Window& w) { return w.start >= rt; });
    }
  }

  // Operator moves (rebalancing + juicing): fleet-wide Poisson streams;
  // each event grabs a random vehicle that is idle for the whole move.
  {
    struct OpEvent {
      std::int64_t t;
      TripKind kind;
    };
    std::vector<OpEvent> events;
    for (std::int64_t t : poisson_times(mix(config.rng_seed, kTagOps, 0),
                                        config.rebalancing_rate_per_hour / 3600.0,
                                        config.start_time, horizon_end)) {
      events.push_back({t, TripKind::Rebalancing});
    }
    for (std::int64_t t : poisson_times(mix(config.rng_seed, kTagOps, 1),
                                        config.juicing_rate_per_hour / 3600.0,
                                        config.start_time, horizon_end)) {
      events.push_back({t, TripKind::Juicing});
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const OpEvent& a, const OpEvent& b) { return a.t < b.t; });
    auto op_eng = seeded_engine(mix(config.rng_seed, kTagOps, 2));
    const bool vanish = config.operator_move_mode == OperatorMoveMode::Vanish;
    std::uint64_t op_no = 0;
    for (const auto& ev : events) {
      // Operator moves reuse the trip duration/speed distributions; they are
      // knobs for error injection, not a logistics model.
      const double duration = sample_trip_duration(op_eng, config);
      const double speed =
          next_uniform(op_eng, config.trip_speed_min_ms, config.trip_speed_max_ms);
      const std::int64_t end =
          ev.t + std::max<std::int64_t>(1, std::llround(duration));
      const std::uint64_t pick = op_eng();
      if (static_cast<double>(end) + gap > static_cast<double>(horizon_end)) {
        ++op_no;
        continue;
      }
      std::vector<std::size_t> candidates;
      for (std::size_t i = 0; i < fleet.size(); ++i) {
        const Vehicle& v = fleet[i];
        if (v.appear_t + static_cast<std::int64_t>(gap) > ev.t) continue;
        if (v.remove_t &&
            static_cast<double>(end) + gap > static_cast<double>(*v.remove_t)) {
          continue;
        }
        if (!window_free(v, ev.t, end, gap)) continue;
        candidates.push_back(i);
      }
      if (candidates.empty()) {
        ++op_no;
        continue;
      }
      Vehicle& v = fleet[candidates[pick % candidates.size()]];
      Window w{ev.t, end, ev.kind, vanish, speed,
               mix(config.rng_seed, kTagPlace, 0xabcdefULL, op_no++)};
      auto at = std::upper_bound(
          v.windows.begin(), v.windows.end(), w.start,
          [](std::int64_t s, const Window& x) { return s < x.start; });
      v.windows.insert(at, w);
    }
  }

  // Resolve positions: initial placement, then chain through the windows.
  for (auto& v : fleet) {
    auto eng = seeded_engine(mix(config.rng_seed, kTagPlace,
                                 static_cast<std::uint64_t>(v.ordinal)));
    v.initial_pos = sample_endpoint(eng, config.bbox, config.hotspots);
    realize_trips(v, config);
  }

  EmitParams params;
  params.feed_id = config.feed_id;
  params.start_time = config.start_time;
  params.horizon_s = config.horizon_s;
  params.snapshot_interval_s = config.snapshot_interval_s;
  params.id_strategy = config.id_strategy;
  params.dynamic_reset_interval_s = config.dynamic_reset_interval_s;
  params.gps_noise_sigma_m = config.gps_noise_sigma_m;
  params.rng_seed = config.rng_seed;
  return collect(fleet, params);
}

SimResult scripted_scenario(const ScriptedScenario& scenario) {
  if (scenario.horizon_s <= 0 || scenario.snapshot_interval_s <= 0) {
    raise(errc::invalid_config, "scripted scenario needs a positive horizon/interval");
  }
  std::vector<Vehicle> fleet;
  for (std::size_t i = 0; i < scenario.vehicles.size(); ++i) {
    const ScriptedVehicle& sv = scenario.vehicles[i];
    Vehicle v;
    v.ordinal = static_cast<std::int64_t>(i);
    v.static_id = sv.id;
    v.appear_t = std::max(sv.appear_t, scenario.start_time);
    v.remove_t = sv.remove_t;
    v.initial_pos = sv.start_pos;
    GeoPoint pos = sv.start_pos;
    std::int64_t prev_end = std::numeric_limits<std::int64_t>::min();
    for (const ScriptedTrip& st : sv.trips) {
      if (st.end <= st.start || st.start < prev_end) {
        raise(errc::overlapping_trips,
              "vehicle " + sv.id + " has overlapping or unordered trips");
      }
      prev_end = st.end;
      v.windows.push_back({st.start, st.end, st.kind, !st.teleport, 0.0, 0});
      GroundTruthTrip trip;
      trip.true_vehicle = v.ordinal;
      trip.origin = pos;
      trip.origin_t = st.start;
      trip.destination = st.destination;
      trip.destination_t = st.end;
      trip.kind = st.kind;
      v.trips.push_back(trip);
      pos = st.destination;
    }
    fleet.push_back(std::move(v));
  }
  EmitParams params;
  params.feed_id = scenario.feed_id;
  params.start_time = scenario.start_time;
  params.horizon_s = scenario.horizon_s;
  params.snapshot_interval_s = scenario.snapshot_interval_s;
  params.id_strategy = scenario.id_strategy;
  params.dynamic_reset_interval_s = scenario.dynamic_reset_interval_s;
  params.rng_seed = scenario.rng_seed;
  return collect(fleet, params);
}

void write_ground_truth_csv(const std::filesystem::path& path,
                            const std::vector<GroundTruthTrip>& trips) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(errc::storage_io, "cannot open " + path.string() + " for write");
  out << "kind,o_lat,o_lon,o_t,d_lat,d_lon,d_t\n";
  for (const auto& t : trips) {
    out << to_string(t.kind) << ',' << dtos(t.origin.lat) << ','
        << dtos(t.origin.lon) << ',' << t.origin_t << ','
        << dtos(t.destination.lat) << ',' << dtos(t.destination.lon) << ','
        << t.destination_t << '\n';
  }
  if (!out.flush()) raise(errc::storage_io, "short write to " + path.string());
}

std::vector<GroundTruthTrip> read_ground_truth_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::storage_io, "cannot open " + path.string());
  std::vector<GroundTruthTrip> trips;
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("kind,")) {
    raise(errc::corrupt_record, path.string() + " is not a ground-truth CSV");
  }
  std::int64_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = split_csv(line);
    if (f.size() != 7) {
      raise(errc::corrupt_record, path.string() + ":" + std::to_string(lineno) +
                                      ": expected 7 fields");
    }
    GroundTruthTrip t;
    t.true_vehicle = -1;  // identity is not part of the file format
    t.kind = trip_kind_from(f[0]);
    t.origin = {parse_double_field(f[1], "o_lat"), parse_double_field(f[2], "o_lon")};
    t.origin_t = parse_int_field(f[3], "o_t");
    t.destination = {parse_double_field(f[4], "d_lat"),
                     parse_double_field(f[5], "d_lon")};
    t.destination_t = parse_int_field(f[6], "d_t");
    trips.push_back(t);
  }
  return trips;
}

}  // namespace odinfer
