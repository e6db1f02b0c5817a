#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "odinfer/geo.hpp"
#include "odinfer/kvconfig.hpp"
#include "odinfer/types.hpp"

namespace odinfer {

enum class IdStrategy : std::uint8_t { Static, Resetting, Dynamic };
enum class OperatorMoveMode : std::uint8_t { Vanish, Teleport };
enum class TripKind : std::uint8_t { Rider, Rebalancing, Juicing };

const char* to_string(TripKind k);
TripKind trip_kind_from(std::string_view s);
IdStrategy id_strategy_from(std::string_view s);

// Gaussian demand hotspot; endpoint sampling mixes these with a uniform
// base layer so simulated cities get downtown-style density gradients.
struct Hotspot {
  GeoPoint center;
  double weight{};    // relative to the uniform layer's weight of 1.0
  double radius_m{};  // Gaussian sigma
};

struct SimConfig {
  std::string feed_id = "sim";
  BBox bbox{38.80, -77.12, 38.99, -76.91};  // defaults to a D.C.-sized box
  std::int64_t fleet_size = 100;
  std::int64_t start_time = 0;              // POSIX seconds UTC
  std::int64_t horizon_s = 86400;
  std::int64_t snapshot_interval_s = 60;

  double trip_rate_per_hour = 0.2;      // Poisson, per vehicle
  double trip_duration_median_s = 600;  // lognormal median
  double trip_duration_sigma = 0.6;     // lognormal shape
  double trip_duration_min_s = 120;     // truncation of the lognormal
  double trip_duration_max_s = 7200;
  double trip_speed_min_ms = 2.5;       // uniform support
  double trip_speed_max_ms = 6.0;
  double gps_noise_sigma_m = 0.0;       // isotropic, per snapshot per vehicle

  double rebalancing_rate_per_hour = 0.0;  // fleet-wide Poisson
  double juicing_rate_per_hour = 0.0;      // fleet-wide Poisson
  double launch_rate_per_day = 0.0;        // fleet-wide Poisson
  double removal_rate_per_day = 0.0;       // fleet-wide Poisson

  IdStrategy id_strategy = IdStrategy::Static;
  std::int64_t dynamic_reset_interval_s = 1800;
  OperatorMoveMode operator_move_mode = OperatorMoveMode::Vanish;

  // Minimum idle time between consecutive movements of one vehicle. Keep it
  // at >= 2x the snapshot interval so every trip is bracketed by at least
  // one snapshot in which the vehicle sits still.
  double min_idle_gap_s = 120;

  std::vector<Hotspot> hotspots;
  std::uint64_t rng_seed = 1;

  void validate() const;  // throws invalid_config
  static SimConfig from_kv(const KvConfig& kv);
};

struct GroundTruthTrip {
  std::int64_t true_vehicle{};  // stable internal identity, never exposed
  GeoPoint origin;
  std::int64_t origin_t{};
  GeoPoint destination;
  std::int64_t destination_t{};
  TripKind kind{};

  friend bool operator==(const GroundTruthTrip&, const GroundTruthTrip&) = default;
};

// When a vehicle entered and (possibly) left the fleet; lets audits
// reconcile visible counts against fleet_size.
struct VehicleLifecycle {
  std::int64_t true_vehicle{};
  std::int64_t appear_t{};
  std::optional<std::int64_t> remove_t;
};

struct SimResult {
  std::vector<Snapshot> snapshots;           // ordered by captured_at
  std::vector<GroundTruthTrip> trips;        // ordered by (origin_t, vehicle)
  std::vector<VehicleLifecycle> roster;      // one entry per vehicle ever active
  std::int64_t vehicles_launched{};
  std::int64_t vehicles_removed{};
};

// Generates the snapshot stream and ground-truth trip log for one scenario.
// Deterministic given the seed; the true world (positions, times) does not
// depend on id_strategy — only the exposed ids do.
SimResult simulate(const SimConfig& config);

// Explicit event list for deterministic unit fixtures. No randomness except
// the exposed-id generators, which are seeded.
struct ScriptedTrip {
  std::int64_t start{};
  std::int64_t end{};
  GeoPoint destination;
  TripKind kind = TripKind::Rider;
  bool teleport = false;  // stay visible at the origin until arrival
};

struct ScriptedVehicle {
  std::string id;  // exposed directly under the Static strategy
  GeoPoint start_pos;
  std::int64_t appear_t{};                 // defaults to the stream start
  std::optional<std::int64_t> remove_t;    // absent from this time onward
  std::vector<ScriptedTrip> trips;         // must be time-ordered
};

struct ScriptedScenario {
  std::string feed_id = "scripted";
  std::int64_t start_time = 0;
  std::int64_t horizon_s = 600;
  std::int64_t snapshot_interval_s = 60;
  IdStrategy id_strategy = IdStrategy::Static;
  std::int64_t dynamic_reset_interval_s = 300;
  std::uint64_t rng_seed = 1;
  std::vector<ScriptedVehicle> vehicles;
};

// Throws overlapping_trips if any vehicle's trips overlap in time.
SimResult scripted_scenario(const ScriptedScenario& scenario);

// Ground-truth CSV: `kind,o_lat,o_lon,o_t,d_lat,d_lon,d_t`.
void write_ground_truth_csv(const std::filesystem::path& path,
                            const std::vector<GroundTruthTrip>& trips);
std::vector<GroundTruthTrip> read_ground_truth_csv(
    const std::filesystem::path& path);

}  // namespace odinfer
