#include "odinfer/poller.hpp"

#include <chrono>
#include <iostream>
#include <thread>

#include "odinfer/errors.hpp"

#if defined(ODINFER_HAVE_OPENSSL)
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

namespace odinfer {
namespace {

struct SplitUrl {
  std::string scheme;  // "http" or "https"
  std::string host;    // host[:port]
  std::string path;    // "/..." incl. query
};

SplitUrl split_url(const std::string& url) {
  SplitUrl out;
  auto pos = url.find("://");
  if (pos == std::string::npos) {
    raise(errc::fatal_config, "feed url missing scheme: " + url);
  }
  out.scheme = url.substr(0, pos);
  if (out.scheme != "http" && out.scheme != "https") {
    raise(errc::fatal_config, "unsupported url scheme: " + out.scheme);
  }
  auto rest = url.substr(pos + 3);
  auto slash = rest.find('/');
  if (slash == std::string::npos) {
    out.host = rest;
    out.path = "/";
  } else {
    out.host = rest.substr(0, slash);
    out.path = rest.substr(slash);
  }
  if (out.host.empty()) {
    raise(errc::fatal_config, "feed url missing host: " + url);
  }
  return out;
}

}  // namespace

Sleeper default_sleeper() {
  // Sleeps in short slices so a stop request is honoured promptly.
  return [](double seconds, const std::atomic<bool>& stop) {
    using namespace std::chrono;
    auto deadline = steady_clock::now() + duration<double>(seconds);
    while (!stop.load(std::memory_order_relaxed) &&
           steady_clock::now() < deadline) {
      std::this_thread::sleep_for(milliseconds(50));
    }
  };
}

Fetcher http_fetcher() {
  return [](const FeedConfig& config) -> FetchResult {
    auto url = split_url(config.url);
#if !defined(ODINFER_HAVE_OPENSSL)
    if (url.scheme == "https") {
      raise(errc::fatal_config, "https feed but built without TLS support");
    }
#endif
    auto base = url.scheme + "://" + url.host;
    httplib::Client client(base);
    client.set_connection_timeout(config.timeout_s, 0);
    client.set_read_timeout(config.timeout_s, 0);
    client.set_follow_location(true);
    httplib::Headers headers;
    for (const auto& [k, v] : config.headers) headers.emplace(k, v);
    auto res = client.Get(url.path, headers);
    if (!res) {
      return {false, "", "transport error: " + httplib::to_string(res.error())};
    }
    if (res->status != 200) {
      return {false, "", "http status " + std::to_string(res->status)};
    }
    return {true, res->body, ""};
  };
}

PollStats poll_loop(const FeedConfig& config, SnapshotStore& store,
                    const std::atomic<bool>& stop, const Fetcher& fetch,
                    const Sleeper& sleep) {
  if (config.feed_id.empty()) {
    raise(errc::fatal_config, "feed_id must not be empty");
  }
  split_url(config.url);  // validate before the first cycle

  PollStats stats;
  while (!stop.load(std::memory_order_relaxed)) {
    bool cycle_ok = false;
    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
      if (stop.load(std::memory_order_relaxed)) break;
      if (attempt > 0) {
        // Linear backoff between retries, capped well under the interval.
        sleep(std::min(5.0 * attempt, 30.0), stop);
        if (stop.load(std::memory_order_relaxed)) break;
      }
      ++stats.attempts;
      FetchResult got;
      try {
        got = fetch(config);
      } catch (const error&) {
        throw;  // config problems are fatal, not retryable
      } catch (const std::exception& e) {
        got = {false, "", e.what()};
      }
      if (!got.ok) {
        std::cerr << "[poller] " << config.feed_id << ": fetch failed ("
                  << got.detail << ")\n";
        continue;
      }
      try {
        auto snap = parse_free_bike_status(got.body, config.feed_id);
        auto now = std::chrono::duration_cast<std::chrono::seconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
        if (store.append(snap, now)) {
          ++stats.stored;
        } else {
          ++stats.duplicates;
        }
        cycle_ok = true;
        break;
      } catch (const error& e) {
        if (e.is_io()) throw;  // disk trouble should surface immediately
        std::cerr << "[poller] " << config.feed_id << ": bad payload ("
                  << e.what() << ")\n";
      }
    }
    if (!cycle_ok && !stop.load(std::memory_order_relaxed)) {
      ++stats.failures;
      std::cerr << "[poller] " << config.feed_id
                << ": giving up on this cycle after "
                << (config.max_retries + 1) << " attempts\n";
    }
    sleep(static_cast<double>(config.poll_interval_s()), stop);
  }
  return stats;
}

}  // namespace odinfer
