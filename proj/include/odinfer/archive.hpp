#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "odinfer/types.hpp"

namespace odinfer {

std::string utc_day(std::int64_t posix_seconds);  // "YYYY-MM-DD"

// Append-only NDJSON snapshot archive, one file per feed and UTC day:
//   <root>/<feed_id>/<YYYY-MM-DD>.ndjson
// Each line is self-describing (feed_id + captured_at). Appends are one
// whole line per snapshot; a crash mid-write leaves at most one corrupt
// trailing line, which scans skip with a warning.
class SnapshotStore {
 public:
  explicit SnapshotStore(std::filesystem::path root);

  // Returns false when the snapshot was skipped: captured_at equal to the
  // last stored one (duplicate poll) or older (clock regression).
  bool append(const Snapshot& s, std::int64_t received_at = 0);

  // Snapshots of one feed with captured_at in [t_start, t_end], strictly
  // ordered by captured_at.
  std::vector<Snapshot> scan(std::string_view feed_id, std::int64_t t_start,
                             std::int64_t t_end) const;

  std::vector<std::string> feeds() const;
  const std::filesystem::path& root() const { return root_; }

 private:
  std::int64_t last_captured(const std::string& feed_id);

  std::filesystem::path root_;
  std::mutex mu_;
  std::map<std::string, std::int64_t, std::less<>> last_captured_;
};

// Reads every *.ndjson file under path (a file, a feed directory, or an
// archive root), grouped per feed and sorted by captured_at.
std::map<std::string, std::vector<Snapshot>> load_streams(
    const std::filesystem::path& path);

}  // namespace odinfer
