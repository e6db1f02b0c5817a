#include "odinfer/archive.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "odinfer/errors.hpp"
#include "odinfer/feed.hpp"

namespace fs = std::filesystem;

namespace odinfer {

std::string utc_day(std::int64_t posix_seconds) {
  std::time_t t = static_cast<std::time_t>(posix_seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[16];
  std::strftime(buf, sizeof buf, "%Y-%m-%d", &tm);
  return buf;
}

namespace {

// Start of the UTC day named by an archive filename, or -1 if the name is
// not a day file.
std::int64_t day_file_start(const fs::path& p) {
  if (p.extension() != ".ndjson") return -1;
  std::tm tm{};
  const std::string stem = p.stem().string();
  if (stem.size() != 10 ||
      sscanf(stem.c_str(), "%4d-%2d-%2d", &tm.tm_year, &tm.tm_mon,
             &tm.tm_mday) != 3)
    return -1;
  tm.tm_year -= 1900;
  tm.tm_mon -= 1;
  return static_cast<std::int64_t>(timegm(&tm));
}

std::vector<fs::path> sorted_ndjson_files(const fs::path& dir) {
  std::vector<fs::path> files;
  if (!fs::is_directory(dir)) return files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".ndjson")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

// Parses one archive file, forwarding each snapshot to sink. A corrupt
// trailing line (torn write) is skipped with a warning; corruption
// elsewhere raises corrupt_record.
template <typename Sink>
void read_archive_file(const fs::path& file, Sink&& sink) {
  std::ifstream in(file);
  if (!in) raise(errc::storage_io, "cannot open " + file.string());
  std::string line;
  std::uint64_t offset = 0;
  while (std::getline(in, line)) {
    const std::uint64_t line_offset = offset;
    offset += line.size() + 1;
    if (line.empty()) continue;
    try {
      ArchiveLine al = parse_archive_line(line);
      sink(std::move(al.snapshot));
    } catch (const error&) {
      std::string rest;
      while (std::getline(in, rest))
        if (!rest.empty())
          raise(errc::corrupt_record,
                file.string() + " at offset " + std::to_string(line_offset));
      std::fprintf(stderr,
                   "warning: skipping corrupt trailing record in %s (offset %llu)\n",
                   file.string().c_str(),
                   static_cast<unsigned long long>(line_offset));
      return;
    }
  }
}

}  // namespace

SnapshotStore::SnapshotStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) raise(errc::storage_io, "cannot create " + root_.string());
}

std::int64_t SnapshotStore::last_captured(const std::string& feed_id) {
  if (auto it = last_captured_.find(feed_id); it != last_captured_.end())
    return it->second;
  // First touch of this feed: recover the high-water mark from disk.
  std::int64_t last = 0;
  for (const fs::path& file : sorted_ndjson_files(root_ / feed_id))
    read_archive_file(file, [&](Snapshot&& s) {
      last = std::max(last, s.captured_at);
    });
  last_captured_[feed_id] = last;
  return last;
}

bool SnapshotStore::append(const Snapshot& s, std::int64_t received_at) {
  std::lock_guard lock(mu_);
  if (s.captured_at <= last_captured(s.feed_id)) return false;

  const fs::path dir = root_ / s.feed_id;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) raise(errc::storage_io, "cannot create " + dir.string());

  const fs::path file = dir / (utc_day(s.captured_at) + ".ndjson");
  std::ofstream out(file, std::ios::app);
  if (!out) raise(errc::storage_io, "cannot open " + file.string());
  out << to_archive_line(s, received_at) << '\n';
  out.flush();
  if (!out) raise(errc::storage_io, "write failed on " + file.string());
  last_captured_[s.feed_id] = s.captured_at;
  return true;
}

std::vector<Snapshot> SnapshotStore::scan(std::string_view feed_id,
                                          std::int64_t t_start,
                                          std::int64_t t_end) const {
  if (t_start > t_end) raise(errc::invalid_interval, "scan t_start > t_end");
  std::vector<Snapshot> out;
  for (const fs::path& file : sorted_ndjson_files(root_ / feed_id)) {
    const std::int64_t day = day_file_start(file);
    if (day >= 0 && (day > t_end || day + 86400 <= t_start)) continue;
    read_archive_file(file, [&](Snapshot&& s) {
      if (s.captured_at >= t_start && s.captured_at <= t_end)
        out.push_back(std::move(s));
    });
  }
  return out;
}

std::vector<std::string> SnapshotStore::feeds() const {
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(root_))
    if (entry.is_directory())
      out.push_back(entry.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::map<std::string, std::vector<Snapshot>> load_streams(const fs::path& path) {
  std::vector<fs::path> files;
  if (fs::is_regular_file(path)) {
    files.push_back(path);
  } else if (fs::is_directory(path)) {
    for (const auto& entry : fs::recursive_directory_iterator(path))
      if (entry.is_regular_file() && entry.path().extension() == ".ndjson")
        files.push_back(entry.path());
    std::sort(files.begin(), files.end());
  } else {
    raise(errc::storage_io, "no such file or directory: " + path.string());
  }

  std::map<std::string, std::vector<Snapshot>> streams;
  for (const fs::path& file : files)
    read_archive_file(file, [&](Snapshot&& s) {
      streams[s.feed_id].push_back(std::move(s));
    });
  for (auto& [feed, stream] : streams)
    std::stable_sort(stream.begin(), stream.end(),
                     [](const Snapshot& a, const Snapshot& b) {
                       return a.captured_at < b.captured_at;
                     });
  return streams;
}

}  // namespace odinfer
