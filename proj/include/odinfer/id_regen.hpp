#pragma once

#include <cstdint>
#include <vector>

#include "odinfer/types.hpp"

namespace odinfer {

// Rewrites the ids of a static-ID stream as a Resetting vendor would have
// published them: a vehicle gets a fresh random id every time it reappears
// after missing at least one snapshot. Coordinates, timestamps and record
// order are untouched. Throws non_monotonic_stream if snapshots are not
// strictly increasing in captured_at.
std::vector<Snapshot> regen_resetting(const std::vector<Snapshot>& stream,
                                      std::uint64_t seed);

// Rewrites ids as a Dynamic vendor would: every id remaps to a fresh random
// id whenever captured_at crosses a reset_interval epoch boundary; within an
// epoch the mapping is stable per original id. Throws non_monotonic_stream
// or invalid_interval (reset_interval <= 0).
std::vector<Snapshot> regen_dynamic(const std::vector<Snapshot>& stream,
                                    std::int64_t reset_interval_s,
                                    std::uint64_t seed);

}  // namespace odinfer
