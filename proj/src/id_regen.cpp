#include "odinfer/id_regen.hpp"

#include <unordered_map>
#include <unordered_set>

#include "odinfer/errors.hpp"
#include "odinfer/rng.hpp"

namespace odinfer {
namespace {

constexpr std::uint64_t kTagResettingRegen = 21;
constexpr std::uint64_t kTagDynamicRegen = 22;

void check_monotonic(const std::vector<Snapshot>& stream) {
  for (std::size_t i = 1; i < stream.size(); ++i) {
    if (stream[i].captured_at <= stream[i - 1].captured_at) {
      raise(errc::non_monotonic_stream,
            "snapshot " + std::to_string(i) + " captured_at " +
                std::to_string(stream[i].captured_at) + " not after " +
                std::to_string(stream[i - 1].captured_at));
    }
  }
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

// Hands out seeded random ids, guaranteed globally unique within one regen
// run so the per-snapshot mapping is a bijection by construction.
class IdMint {
 public:
  IdMint(std::uint64_t seed, std::uint64_t tag) : seed_(seed), tag_(tag) {}

  std::string fresh() {
    while (true) {
      std::string id = uuid_for(mix(seed_, tag_, counter_++));
      if (issued_.insert(id).second) return id;
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t tag_;
  std::uint64_t counter_ = 0;
  std::unordered_set<std::string> issued_;
};

}  // namespace

std::vector<Snapshot> regen_resetting(const std::vector<Snapshot>& stream,
                                      std::uint64_t seed) {
  check_monotonic(stream);
  IdMint mint(seed, kTagResettingRegen);

  struct State {
    std::size_t last_seen{};
    std::string current;
  };
  std::unordered_map<std::string, State> state;

  std::vector<Snapshot> out = stream;
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (auto& rec : out[k].records) {
      auto it = state.find(rec.vehicle_id);
      if (it == state.end()) {
        it = state.emplace(rec.vehicle_id, State{k, mint.fresh()}).first;
      } else {
        // Missing >= 1 snapshot means the vendor saw a trip end and rolled
        // the id; contiguous presence keeps it.
        if (it->second.last_seen + 1 < k) it->second.current = mint.fresh();
        it->second.last_seen = k;
      }
      rec.vehicle_id = it->second.current;
    }
  }
  return out;
}

std::vector<Snapshot> regen_dynamic(const std::vector<Snapshot>& stream,
                                    std::int64_t reset_interval_s,
                                    std::uint64_t seed) {
  if (reset_interval_s <= 0) {
    raise(errc::invalid_interval, "reset_interval must be > 0, got " +
                                      std::to_string(reset_interval_s));
  }
  check_monotonic(stream);
  IdMint mint(seed, kTagDynamicRegen);

  std::unordered_map<std::string, std::string> mapping;
  bool have_epoch = false;
  std::int64_t epoch = 0;

  std::vector<Snapshot> out = stream;
  for (auto& snap : out) {
    const std::int64_t e = floor_div(snap.captured_at, reset_interval_s);
    if (!have_epoch || e != epoch) {
      mapping.clear();  // system-wide re-randomization at the boundary
      epoch = e;
      have_epoch = true;
    }
    for (auto& rec : snap.records) {
      auto it = mapping.find(rec.vehicle_id);
      if (it == mapping.end()) {
        it = mapping.emplace(rec.vehicle_id, mint.fresh()).first;
      }
      rec.vehicle_id = it->second;
    }
  }
  return out;
}

}  // namespace odinfer
