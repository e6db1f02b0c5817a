#include "odinfer/poller.hpp"

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <string>

#include <doctest.h>

#include "odinfer/errors.hpp"

using namespace odinfer;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int n = 0;
    path = fs::temp_directory_path() /
           ("odinfer_poll_" + std::to_string(::getpid()) + "_" +
            std::to_string(n++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

Sleeper instant_sleeper() {
  return [](double, const std::atomic<bool>&) {};
}

std::string payload_at(std::int64_t t) {
  return "{\"last_updated\":" + std::to_string(t) +
         ",\"ttl\":60,\"data\":{\"bikes\":[{\"bike_id\":\"a\",\"lat\":38.9,"
         "\"lon\":-77.0}]}}";
}

FeedConfig test_feed() {
  FeedConfig f;
  f.feed_id = "test";
  f.url = "http://feed.test/fbs.json";
  f.declared_ttl = 60;
  f.max_retries = 3;
  return f;
}

}  // namespace

TEST_CASE("stores each new snapshot and stops promptly") {
  TempDir tmp;
  SnapshotStore store(tmp.path);
  std::atomic<bool> stop{false};
  std::int64_t t = 1000;
  int fetches = 0;
  auto fetch = [&](const FeedConfig&) -> FetchResult {
    if (++fetches == 5) stop = true;
    return {true, payload_at(t += 60), ""};
  };
  const PollStats stats = poll_loop(test_feed(), store, stop, fetch,
                                    instant_sleeper());
  CHECK(stats.attempts == 5);
  CHECK(stats.stored == 5);
  CHECK(stats.duplicates == 0);
  CHECK(stats.failures == 0);
  CHECK(store.scan("test", 0, 1 << 30).size() == 5);
}

TEST_CASE("an unchanged feed counts duplicates, not new rows") {
  TempDir tmp;
  SnapshotStore store(tmp.path);
  std::atomic<bool> stop{false};
  int fetches = 0;
  auto fetch = [&](const FeedConfig&) -> FetchResult {
    if (++fetches == 4) stop = true;
    return {true, payload_at(5000), ""};  // captured_at never advances
  };
  const PollStats stats = poll_loop(test_feed(), store, stop, fetch,
                                    instant_sleeper());
  CHECK(stats.stored == 1);
  CHECK(stats.duplicates == 3);
  CHECK(store.scan("test", 0, 1 << 30).size() == 1);
}

TEST_CASE("transient fetch errors are retried within the cycle") {
  TempDir tmp;
  SnapshotStore store(tmp.path);
  std::atomic<bool> stop{false};
  int fetches = 0;
  auto fetch = [&](const FeedConfig&) -> FetchResult {
    ++fetches;
    if (fetches < 3) return {false, "", "connection refused"};
    stop = true;
    return {true, payload_at(7000), ""};
  };
  const PollStats stats = poll_loop(test_feed(), store, stop, fetch,
                                    instant_sleeper());
  CHECK(stats.attempts == 3);
  CHECK(stats.stored == 1);
  CHECK(stats.failures == 0);  // the cycle ultimately succeeded
}

TEST_CASE("a cycle that exhausts retries is counted as a failure") {
  TempDir tmp;
  SnapshotStore store(tmp.path);
  std::atomic<bool> stop{false};
  auto f = test_feed();
  f.max_retries = 2;
  auto fetch = [&](const FeedConfig&) -> FetchResult {
    return {false, "", "boom"};
  };
  // Backoff sleeps are short; the end-of-cycle sleep is the poll interval.
  // Stopping there lets the cycle run to completion first.
  auto sleeper = [&](double seconds, const std::atomic<bool>&) {
    if (seconds >= 60.0) stop = true;
  };
  const PollStats stats = poll_loop(f, store, stop, fetch, sleeper);
  CHECK(stats.attempts == 3);  // 1 + max_retries
  CHECK(stats.failures == 1);
  CHECK(stats.stored == 0);
}

TEST_CASE("unparseable payloads are retried like transport failures") {
  TempDir tmp;
  SnapshotStore store(tmp.path);
  std::atomic<bool> stop{false};
  int fetches = 0;
  auto fetch = [&](const FeedConfig&) -> FetchResult {
    ++fetches;
    if (fetches == 1) return {true, "{\"nope\":", ""};
    stop = true;
    return {true, payload_at(9000), ""};
  };
  const PollStats stats = poll_loop(test_feed(), store, stop, fetch,
                                    instant_sleeper());
  CHECK(stats.attempts == 2);
  CHECK(stats.stored == 1);
  CHECK(stats.failures == 0);
}

TEST_CASE("config problems are fatal before the first fetch") {
  TempDir tmp;
  SnapshotStore store(tmp.path);
  std::atomic<bool> stop{false};
  auto fetch = [&](const FeedConfig&) -> FetchResult {
    FAIL("must not fetch with a broken config");
    return {false, "", ""};
  };

  auto f = test_feed();
  f.url = "not a url";
  CHECK_THROWS_AS(poll_loop(f, store, stop, fetch, instant_sleeper()), error);

  f = test_feed();
  f.url = "ftp://feed.test/x";
  CHECK_THROWS_AS(poll_loop(f, store, stop, fetch, instant_sleeper()), error);

  f = test_feed();
  f.feed_id = "";
  CHECK_THROWS_AS(poll_loop(f, store, stop, fetch, instant_sleeper()), error);
}

TEST_CASE("a stop requested during the interval sleep ends the loop") {
  TempDir tmp;
  SnapshotStore store(tmp.path);
  std::atomic<bool> stop{false};
  auto fetch = [&](const FeedConfig&) -> FetchResult {
    return {true, payload_at(1234), ""};
  };
  // The sleeper stands in for a long wait: it flags stop immediately,
  // exactly as the default sleeper would react to an external signal.
  auto sleeper = [&](double, const std::atomic<bool>&) { stop = true; };
  const PollStats stats = poll_loop(test_feed(), store, stop, fetch, sleeper);
  CHECK(stats.attempts == 1);
  CHECK(stats.stored == 1);
}
