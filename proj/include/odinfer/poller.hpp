#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>

#include "odinfer/archive.hpp"
#include "odinfer/feed.hpp"

namespace odinfer {

struct FetchResult {
  bool ok{};
  std::string body;    // on success
  std::string detail;  // on failure
};

// Pluggable transport so the loop is testable without a network.
using Fetcher = std::function<FetchResult(const FeedConfig&)>;

// HTTP(S) GET of config.url with the configured headers and timeout.
Fetcher http_fetcher();

// Pluggable wait so tests can run the loop at full speed. The default
// sleeps in short slices and returns early when stop becomes true.
using Sleeper = std::function<void(double seconds, const std::atomic<bool>& stop)>;
Sleeper default_sleeper();

struct PollStats {
  std::int64_t attempts{};
  std::int64_t stored{};
  std::int64_t duplicates{};
  std::int64_t failures{};  // poll cycles abandoned after max_retries
};

// Polls one feed every config.poll_interval_s() until stop becomes true,
// parsing each payload and appending it to the store. Duplicate
// last_updated values are not stored. Transient fetch/parse failures are
// retried up to max_retries per cycle, then logged and skipped; they never
// abort the loop. A structurally bad config (unsupported or unparseable
// URL) raises fatal_config before the first fetch.
PollStats poll_loop(const FeedConfig& config, SnapshotStore& store,
                    const std::atomic<bool>& stop,
                    const Fetcher& fetch = http_fetcher(),
                    const Sleeper& sleep = default_sleeper());

}  // namespace odinfer
