// Times the OpenMP inference kernels against the serial reference on one
// mid-sized simulated day and verifies both produce identical output.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "odinfer/id_regen.hpp"
#include "odinfer/inference.hpp"
#include "odinfer/sim.hpp"

using namespace odinfer;

namespace {

template <typename Fn>
double time_best_of(int reps, const Fn& fn) {
  double best = 1e100;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (s < best) best = s;
  }
  return best;
}

struct Row {
  const char* name;
  double parallel_s;
  double serial_s;
  bool equal;
};

}  // namespace

int main() {
  SimConfig cfg;
  cfg.fleet_size = 500;
  cfg.horizon_s = 6 * 3600;
  cfg.trip_rate_per_hour = 1.0;
  cfg.gps_noise_sigma_m = 4.0;
  cfg.rng_seed = 3;
  const SimResult world = simulate(cfg);
  const auto& stream = world.snapshots;
  const auto reset_stream = regen_resetting(stream, 9);
  const auto dyn_stream = regen_dynamic(stream, 1800, 9);
  std::printf("world: %zu snapshots, %zu trips, fleet %lld\n", stream.size(),
              world.trips.size(), static_cast<long long>(cfg.fleet_size));

  const InferenceConfig inf;
  const int reps = 5;
  std::vector<Row> rows;

  {
    std::vector<TripOD> a, b;
    const double tp = time_best_of(reps, [&] { a = infer_static(stream, inf); });
    const double ts =
        time_best_of(reps, [&] { b = reference::infer_static(stream, inf); });
    rows.push_back({"infer_static", tp, ts, a == b});
  }
  {
    std::vector<TripEndpoint> a, b;
    const double tp =
        time_best_of(reps, [&] { a = infer_resetting(reset_stream, inf); });
    const double ts = time_best_of(
        reps, [&] { b = reference::infer_resetting(reset_stream, inf); });
    rows.push_back({"infer_resetting", tp, ts, a == b});
  }
  {
    std::vector<TripEndpoint> a, b;
    const double tp =
        time_best_of(reps, [&] { a = infer_dynamic(dyn_stream, inf); });
    const double ts = time_best_of(
        reps, [&] { b = reference::infer_dynamic(dyn_stream, inf); });
    rows.push_back({"infer_dynamic", tp, ts, a == b});
  }

  std::printf("%-16s %12s %12s %9s %s\n", "kernel", "parallel", "serial",
              "speedup", "outputs");
  bool all_equal = true;
  for (const Row& r : rows) {
    std::printf("%-16s %10.3f ms %10.3f ms %8.2fx %s\n", r.name,
                r.parallel_s * 1e3, r.serial_s * 1e3,
                r.serial_s / r.parallel_s, r.equal ? "equal" : "DIFFER");
    all_equal = all_equal && r.equal;
  }
  if (!all_equal) {
    std::printf("FAIL: parallel and serial outputs differ\n");
    return 1;
  }
  return 0;
}
