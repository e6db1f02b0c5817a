#include "odinfer/sim.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <string>

#include <doctest.h>

#include "odinfer/errors.hpp"

using namespace odinfer;
namespace fs = std::filesystem;

namespace {

const GeoPoint kP0{38.9000, -77.0000};
const GeoPoint kP1{38.9100, -76.9900};

ScriptedScenario one_vehicle_one_trip() {
  ScriptedScenario sc;
  sc.horizon_s = 600;
  sc.snapshot_interval_s = 60;
  ScriptedVehicle v;
  v.id = "A";
  v.start_pos = kP0;
  v.trips.push_back({120, 420, kP1});
  sc.vehicles.push_back(v);
  return sc;
}

const VehicleRecord* find_id(const Snapshot& s, const std::string& id) {
  auto it = std::find_if(s.records.begin(), s.records.end(),
                         [&](const VehicleRecord& r) { return r.vehicle_id == id; });
  return it == s.records.end() ? nullptr : &*it;
}

SimConfig small_world() {
  SimConfig c;
  c.fleet_size = 25;
  c.horizon_s = 6 * 3600;
  c.snapshot_interval_s = 60;
  c.trip_rate_per_hour = 1.0;
  c.rng_seed = 99;
  return c;
}

}  // namespace

TEST_CASE("a motionless world emits one identical snapshot per interval") {
  SimConfig c;
  c.fleet_size = 3;
  c.horizon_s = 600;
  c.snapshot_interval_s = 60;
  c.trip_rate_per_hour = 0.0;
  const SimResult r = simulate(c);
  REQUIRE(r.snapshots.size() == 10);
  CHECK(r.trips.empty());
  CHECK(r.vehicles_launched == 0);
  CHECK(r.vehicles_removed == 0);
  for (std::size_t k = 0; k < r.snapshots.size(); ++k) {
    const Snapshot& s = r.snapshots[k];
    CHECK(s.captured_at == static_cast<std::int64_t>(k) * 60);
    REQUIRE(s.records.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(s.records[i].vehicle_id == r.snapshots[0].records[i].vehicle_id);
      CHECK(s.records[i].lat == r.snapshots[0].records[i].lat);
      CHECK(s.records[i].lon == r.snapshots[0].records[i].lon);
      CHECK(s.records[i].observed_at == s.captured_at);
      CHECK(c.bbox.contains(s.records[i].pos()));
    }
  }
}

TEST_CASE("a vehicle on a trip vanishes strictly between its endpoints") {
  const SimResult r = scripted_scenario(one_vehicle_one_trip());
  REQUIRE(r.snapshots.size() == 10);
  const std::set<std::int64_t> absent{180, 240, 300, 360};
  for (const Snapshot& s : r.snapshots) {
    const VehicleRecord* rec = find_id(s, "A");
    if (absent.count(s.captured_at)) {
      CHECK(rec == nullptr);
    } else {
      REQUIRE(rec != nullptr);
      const GeoPoint expect = s.captured_at < 420 ? kP0 : kP1;
      CHECK(rec->lat == expect.lat);
      CHECK(rec->lon == expect.lon);
    }
  }
  REQUIRE(r.trips.size() == 1);
  CHECK(r.trips[0].origin == kP0);
  CHECK(r.trips[0].origin_t == 120);
  CHECK(r.trips[0].destination == kP1);
  CHECK(r.trips[0].destination_t == 420);
  CHECK(r.trips[0].kind == TripKind::Rider);
}

TEST_CASE("teleport-mode moves keep the vehicle listed at its origin") {
  auto sc = one_vehicle_one_trip();
  sc.vehicles[0].trips[0].kind = TripKind::Rebalancing;
  sc.vehicles[0].trips[0].teleport = true;
  const SimResult r = scripted_scenario(sc);
  for (const Snapshot& s : r.snapshots) {
    const VehicleRecord* rec = find_id(s, "A");
    REQUIRE(rec != nullptr);  // never vanishes
    const GeoPoint expect = s.captured_at < 420 ? kP0 : kP1;
    CHECK(rec->lat == expect.lat);
    CHECK(rec->lon == expect.lon);
  }
  REQUIRE(r.trips.size() == 1);
  CHECK(r.trips[0].kind == TripKind::Rebalancing);
}

TEST_CASE("appear and remove times bound a vehicle's visibility") {
  ScriptedScenario sc;
  sc.horizon_s = 600;
  ScriptedVehicle v;
  v.id = "B";
  v.start_pos = kP0;
  v.appear_t = 120;
  v.remove_t = 300;
  sc.vehicles.push_back(v);
  const SimResult r = scripted_scenario(sc);
  for (const Snapshot& s : r.snapshots) {
    const bool visible = find_id(s, "B") != nullptr;
    CHECK(visible == (s.captured_at >= 120 && s.captured_at < 300));
  }
  REQUIRE(r.roster.size() == 1);
  CHECK(r.roster[0].appear_t == 120);
  CHECK(r.roster[0].remove_t == 300);
}

TEST_CASE("dynamic ids rotate exactly at reset-interval boundaries") {
  ScriptedScenario sc;
  sc.horizon_s = 600;
  sc.id_strategy = IdStrategy::Dynamic;
  sc.dynamic_reset_interval_s = 300;
  ScriptedVehicle v;
  v.id = "ignored";
  v.start_pos = kP0;
  sc.vehicles.push_back(v);
  const SimResult r = scripted_scenario(sc);
  REQUIRE(r.snapshots.size() == 10);
  std::vector<std::string> ids;
  for (const Snapshot& s : r.snapshots) {
    REQUIRE(s.records.size() == 1);
    ids.push_back(s.records[0].vehicle_id);
  }
  // Epoch 0 covers t in [0, 300), epoch 1 covers [300, 600).
  for (int k = 1; k < 5; ++k) CHECK(ids[k] == ids[0]);
  for (int k = 6; k < 10; ++k) CHECK(ids[k] == ids[5]);
  CHECK(ids[5] != ids[0]);
  CHECK(ids[0] != "ignored");  // exposed ids are synthetic
}

TEST_CASE("resetting ids change after every completed trip") {
  auto sc = one_vehicle_one_trip();
  sc.id_strategy = IdStrategy::Resetting;
  const SimResult r = scripted_scenario(sc);
  std::string before, after;
  for (const Snapshot& s : r.snapshots) {
    REQUIRE(s.records.size() <= 1);
    if (s.records.empty()) continue;
    auto& id = s.captured_at <= 120 ? before : after;
    if (id.empty()) {
      id = s.records[0].vehicle_id;
    } else {
      CHECK(s.records[0].vehicle_id == id);  // stable within the run
    }
  }
  CHECK(!before.empty());
  CHECK(!after.empty());
  CHECK(before != after);
}

TEST_CASE("overlapping or unordered scripted trips are rejected") {
  auto sc = one_vehicle_one_trip();
  sc.vehicles[0].trips.push_back({400, 500, kP0});  // starts before 420
  try {
    scripted_scenario(sc);
    FAIL("expected overlapping_trips");
  } catch (const error& e) {
    CHECK(e.code() == errc::overlapping_trips);
  }
  sc = one_vehicle_one_trip();
  sc.vehicles[0].trips.push_back({500, 500, kP0});  // zero duration
  CHECK_THROWS_AS(scripted_scenario(sc), error);
}

TEST_CASE("equal config and seed reproduce the world bit for bit") {
  const SimConfig c = small_world();
  const SimResult a = simulate(c);
  const SimResult b = simulate(c);
  CHECK(a.snapshots == b.snapshots);
  CHECK(a.trips == b.trips);
  SimConfig c2 = c;
  c2.rng_seed = 100;
  const SimResult d = simulate(c2);
  CHECK(a.snapshots != d.snapshots);
}

TEST_CASE("the true world does not depend on the id strategy") {
  SimConfig c = small_world();
  c.gps_noise_sigma_m = 3.0;
  SimConfig cr = c;
  cr.id_strategy = IdStrategy::Resetting;
  SimConfig cd = c;
  cd.id_strategy = IdStrategy::Dynamic;
  cd.dynamic_reset_interval_s = 900;
  const SimResult rs = simulate(c);
  const SimResult rr = simulate(cr);
  const SimResult rd = simulate(cd);
  CHECK(rs.trips == rr.trips);
  CHECK(rs.trips == rd.trips);
  REQUIRE(rs.snapshots.size() == rr.snapshots.size());
  REQUIRE(rs.snapshots.size() == rd.snapshots.size());
  for (std::size_t k = 0; k < rs.snapshots.size(); ++k) {
    const auto& a = rs.snapshots[k].records;
    const auto& b = rr.snapshots[k].records;
    const auto& d = rd.snapshots[k].records;
    REQUIRE(a.size() == b.size());
    REQUIRE(a.size() == d.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].lat == b[i].lat);
      CHECK(a[i].lon == b[i].lon);
      CHECK(a[i].lat == d[i].lat);
      CHECK(a[i].lon == d[i].lon);
    }
  }
}

TEST_CASE("trips respect the configured speed, duration and idle-gap bounds") {
  SimConfig c = small_world();
  c.trip_rate_per_hour = 2.0;
  const SimResult r = simulate(c);
  REQUIRE(r.trips.size() > 50);
  const std::int64_t horizon_end = c.start_time + c.horizon_s;
  std::map<std::int64_t, std::vector<const GroundTruthTrip*>> by_vehicle;
  for (const auto& t : r.trips) {
    const auto duration = static_cast<double>(t.destination_t - t.origin_t);
    CHECK(duration >= c.trip_duration_min_s);
    CHECK(duration <= c.trip_duration_max_s);
    const double speed = geo_distance(t.origin, t.destination) / duration;
    // geo_distance and the generator's planar walk differ by the projection
    // error, well under half a percent at this scale.
    CHECK(speed > c.trip_speed_min_ms * 0.995);
    CHECK(speed < c.trip_speed_max_ms * 1.005);
    CHECK(c.bbox.contains(t.origin));
    CHECK(c.bbox.contains(t.destination));
    CHECK(static_cast<double>(t.destination_t) + c.min_idle_gap_s <=
          static_cast<double>(horizon_end));
    by_vehicle[t.true_vehicle].push_back(&t);
  }
  for (auto& [veh, trips] : by_vehicle) {
    for (std::size_t i = 1; i < trips.size(); ++i) {
      CHECK(static_cast<double>(trips[i]->origin_t) >=
            static_cast<double>(trips[i - 1]->destination_t) + c.min_idle_gap_s);
    }
  }
}

TEST_CASE("visible, riding, launched and removed vehicles reconcile") {
  SimConfig c = small_world();
  c.fleet_size = 30;
  c.launch_rate_per_day = 20.0;
  c.removal_rate_per_day = 20.0;
  c.rebalancing_rate_per_hour = 2.0;
  c.juicing_rate_per_hour = 1.0;

  for (auto mode : {OperatorMoveMode::Vanish, OperatorMoveMode::Teleport}) {
    c.operator_move_mode = mode;
    const SimResult r = simulate(c);
    CHECK(r.vehicles_launched > 0);
    CHECK(r.vehicles_removed > 0);
    for (const Snapshot& s : r.snapshots) {
      const std::int64_t t = s.captured_at;
      std::int64_t riding = 0;
      for (const auto& trip : r.trips) {
        const bool vanishes =
            trip.kind == TripKind::Rider || mode == OperatorMoveMode::Vanish;
        if (vanishes && trip.origin_t < t && t < trip.destination_t) ++riding;
      }
      std::int64_t removed = 0;
      std::int64_t launched = 0;
      for (const auto& v : r.roster) {
        if (v.remove_t && *v.remove_t <= t) ++removed;
        if (v.appear_t > c.start_time && v.appear_t <= t) ++launched;
      }
      CHECK(static_cast<std::int64_t>(s.records.size()) + riding + removed -
                launched ==
            c.fleet_size);
    }
    // Operator moves actually happen and are logged with their kind.
    std::int64_t ops = 0;
    for (const auto& trip : r.trips) ops += trip.kind != TripKind::Rider;
    CHECK(ops > 0);
  }
}

TEST_CASE("gps noise perturbs every fix but preserves the true world") {
  SimConfig clean = small_world();
  SimConfig noisy = clean;
  noisy.gps_noise_sigma_m = 5.0;
  const SimResult a = simulate(clean);
  const SimResult b = simulate(noisy);
  CHECK(a.trips == b.trips);  // ground truth is noise-free
  REQUIRE(a.snapshots.size() == b.snapshots.size());
  double sum = 0.0;
  std::int64_t n = 0;
  for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
    const auto& ra = a.snapshots[k].records;
    const auto& rb = b.snapshots[k].records;
    REQUIRE(ra.size() == rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) {
      const double off = geo_distance(ra[i].pos(), rb[i].pos());
      CHECK(off < 6.0 * noisy.gps_noise_sigma_m);  // Rayleigh tail
      sum += off;
      ++n;
    }
  }
  REQUIRE(n > 1000);
  const double mean = sum / static_cast<double>(n);
  // Rayleigh mean is sigma * sqrt(pi/2) ~ 6.27 m at sigma = 5.
  CHECK(mean > 4.0);
  CHECK(mean < 9.0);
}

TEST_CASE("hotspots concentrate vehicle placement") {
  SimConfig c;
  c.fleet_size = 200;
  c.horizon_s = 120;
  c.trip_rate_per_hour = 0.0;
  const GeoPoint center{38.895, -77.02};
  c.hotspots.push_back({center, 100.0, 200.0});
  const SimResult r = simulate(c);
  REQUIRE(!r.snapshots.empty());
  std::int64_t near = 0;
  for (const auto& rec : r.snapshots[0].records) {
    if (geo_distance(rec.pos(), center) < 600.0) ++near;
  }
  CHECK(near > 160);  // ~99% of mass sits in the hotspot at weight 100:1
}

TEST_CASE("config parsing covers every knob and validates") {
  const auto kv = KvConfig::parse_string(
      "feed_id = dc\n"
      "bbox = 38.80, -77.12, 38.99, -76.91\n"
      "fleet_size = 7\n"
      "start_time = 1000\n"
      "horizon_s = 3600\n"
      "snapshot_interval_s = 30\n"
      "trip_rate_per_hour = 0.5\n"
      "trip_duration_median_s = 500\n"
      "trip_duration_sigma = 0.4\n"
      "trip_duration_min_s = 100\n"
      "trip_duration_max_s = 900\n"
      "trip_speed_min_ms = 2.0\n"
      "trip_speed_max_ms = 5.0\n"
      "gps_noise_sigma_m = 3\n"
      "rebalancing_rate_per_hour = 0.25\n"
      "juicing_rate_per_hour = 0.125\n"
      "launch_rate_per_day = 1\n"
      "removal_rate_per_day = 2\n"
      "id_strategy = dynamic\n"
      "dynamic_reset_interval_s = 700\n"
      "operator_move_mode = teleport\n"
      "min_idle_gap_s = 90\n"
      "hotspot.downtown = 38.9, -77.03, 25, 300\n"
      "rng_seed = 17\n");
  const SimConfig c = SimConfig::from_kv(kv);
  CHECK(c.feed_id == "dc");
  CHECK(c.bbox.lat_min == 38.80);
  CHECK(c.bbox.lon_max == -76.91);
  CHECK(c.fleet_size == 7);
  CHECK(c.start_time == 1000);
  CHECK(c.horizon_s == 3600);
  CHECK(c.snapshot_interval_s == 30);
  CHECK(c.trip_rate_per_hour == 0.5);
  CHECK(c.trip_duration_median_s == 500);
  CHECK(c.trip_duration_sigma == 0.4);
  CHECK(c.trip_duration_min_s == 100);
  CHECK(c.trip_duration_max_s == 900);
  CHECK(c.trip_speed_min_ms == 2.0);
  CHECK(c.trip_speed_max_ms == 5.0);
  CHECK(c.gps_noise_sigma_m == 3);
  CHECK(c.rebalancing_rate_per_hour == 0.25);
  CHECK(c.juicing_rate_per_hour == 0.125);
  CHECK(c.launch_rate_per_day == 1);
  CHECK(c.removal_rate_per_day == 2);
  CHECK(c.id_strategy == IdStrategy::Dynamic);
  CHECK(c.dynamic_reset_interval_s == 700);
  CHECK(c.operator_move_mode == OperatorMoveMode::Teleport);
  CHECK(c.min_idle_gap_s == 90);
  REQUIRE(c.hotspots.size() == 1);
  CHECK(c.hotspots[0].center == GeoPoint{38.9, -77.03});
  CHECK(c.hotspots[0].weight == 25);
  CHECK(c.hotspots[0].radius_m == 300);
  CHECK(c.rng_seed == 17);
}

TEST_CASE("invalid configurations are rejected") {
  auto expect_invalid = [](auto&& tweak) {
    SimConfig c;
    tweak(c);
    try {
      c.validate();
      FAIL("expected invalid_config");
    } catch (const error& e) {
      CHECK(e.code() == errc::invalid_config);
    }
  };
  expect_invalid([](SimConfig& c) { c.fleet_size = -1; });
  expect_invalid([](SimConfig& c) { c.horizon_s = 0; });
  expect_invalid([](SimConfig& c) { c.snapshot_interval_s = 0; });
  expect_invalid([](SimConfig& c) { c.trip_rate_per_hour = -0.1; });
  expect_invalid([](SimConfig& c) { c.trip_speed_min_ms = 0.0; });
  expect_invalid([](SimConfig& c) {
    c.trip_speed_min_ms = 5.0;
    c.trip_speed_max_ms = 2.0;
  });
  expect_invalid([](SimConfig& c) {
    c.trip_duration_min_s = 500;
    c.trip_duration_max_s = 400;
  });
  expect_invalid([](SimConfig& c) {
    c.id_strategy = IdStrategy::Dynamic;
    c.dynamic_reset_interval_s = 60;  // not above the snapshot interval
  });
  expect_invalid([](SimConfig& c) { c.bbox = BBox::empty(); });
  expect_invalid([](SimConfig& c) { c.hotspots.push_back({{91.0, 0.0}, 1, 100}); });
  expect_invalid([](SimConfig& c) { c.hotspots.push_back({{38.9, -77.0}, 1, 0}); });
  expect_invalid([](SimConfig& c) { c.feed_id.clear(); });
  CHECK_THROWS_AS(
      SimConfig::from_kv(KvConfig::parse_string("operator_move_mode = warp\n")),
      error);
  CHECK_THROWS_AS(
      SimConfig::from_kv(KvConfig::parse_string("bbox = 1,2,3\n")), error);
  CHECK_THROWS_AS(
      SimConfig::from_kv(KvConfig::parse_string("hotspot.a = 38.9,-77\n")),
      error);
  CHECK_THROWS_AS(
      SimConfig::from_kv(KvConfig::parse_string("id_strategy = rotating\n")),
      error);
}

TEST_CASE("ground-truth csv round-trips every field it stores") {
  const SimResult r = simulate(small_world());
  REQUIRE(!r.trips.empty());
  const fs::path path = fs::temp_directory_path() /
                        ("odinfer_gt_" + std::to_string(::getpid()) + ".csv");
  write_ground_truth_csv(path, r.trips);
  const auto back = read_ground_truth_csv(path);
  REQUIRE(back.size() == r.trips.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].kind == r.trips[i].kind);
    CHECK(back[i].origin == r.trips[i].origin);  // exact double round-trip
    CHECK(back[i].origin_t == r.trips[i].origin_t);
    CHECK(back[i].destination == r.trips[i].destination);
    CHECK(back[i].destination_t == r.trips[i].destination_t);
    CHECK(back[i].true_vehicle == -1);  // identity never leaves the sim
  }
  fs::remove(path);
  CHECK_THROWS_AS(read_ground_truth_csv(path), error);
}

TEST_CASE("trip log is ordered by origin time") {
  const SimResult r = simulate(small_world());
  for (std::size_t i = 1; i < r.trips.size(); ++i) {
    CHECK(r.trips[i - 1].origin_t <= r.trips[i].origin_t);
  }
}
