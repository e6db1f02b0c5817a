// odinfer: scrape GBFS free_bike_status feeds, simulate fleets, rewrite
// vehicle ids, infer trip origins/destinations and score them on a grid.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "json.hpp"

#include "odinfer/archive.hpp"
#include "odinfer/errors.hpp"
#include "odinfer/evaluate.hpp"
#include "odinfer/feed.hpp"
#include "odinfer/id_regen.hpp"
#include "odinfer/inference.hpp"
#include "odinfer/kvconfig.hpp"
#include "odinfer/poller.hpp"
#include "odinfer/sim.hpp"
#include "odinfer/text.hpp"

namespace fs = std::filesystem;
using namespace odinfer;

namespace {

std::atomic<bool> g_interrupted{false};

void handle_sigint(int) { g_interrupted.store(true); }

// 0 success, 1 usage/config, 2 data, 3 I/O.
int exit_code_for(const error& e) {
  if (e.is_io()) return 3;
  if (e.code() == errc::invalid_config || e.code() == errc::fatal_config) {
    return 1;
  }
  return 2;
}

KvConfig load_config(const std::string& path,
                     const std::vector<std::string>& overrides) {
  KvConfig kv = path.empty() ? KvConfig{} : KvConfig::parse_file(path);
  for (const auto& kvpair : overrides) {
    auto eq = kvpair.find('=');
    if (eq == std::string::npos || eq == 0) {
      raise(errc::invalid_config, "--set expects key=value, got '" + kvpair + "'");
    }
    kv.set(kvpair.substr(0, eq), kvpair.substr(eq + 1));
  }
  return kv;
}

// Writes via a temp file and renames over the target, so re-runs replace
// outputs atomically.
template <typename Writer>
void write_atomic(const fs::path& path, Writer&& writer) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  writer(tmp);
  fs::rename(tmp, path);
}

void write_text_atomic(const fs::path& path, const std::string& text) {
  write_atomic(path, [&](const fs::path& tmp) {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(errc::storage_io, "cannot open " + tmp.string() + " for write");
    out << text;
    if (!out.flush()) raise(errc::storage_io, "short write to " + tmp.string());
  });
}

// Feeds are configured as flat keys: feed.<id>.url, feed.<id>.ttl,
// feed.<id>.timeout_s, feed.<id>.max_retries, feed.<id>.header.<Name>.
std::vector<FeedConfig> feeds_from_config(const KvConfig& kv) {
  std::map<std::string, FeedConfig> feeds;
  for (const auto& [key, value] : kv.with_prefix("feed.")) {
    auto dot = key.find('.');
    if (dot == std::string::npos || dot == 0) {
      raise(errc::fatal_config, "bad feed key 'feed." + key + "'");
    }
    const std::string id = key.substr(0, dot);
    const std::string field = key.substr(dot + 1);
    FeedConfig& f = feeds[id];
    f.feed_id = id;
    if (field == "url") {
      f.url = value;
    } else if (field == "ttl") {
      f.declared_ttl = parse_int_field(value, "feed ttl");
    } else if (field == "timeout_s") {
      f.timeout_s = parse_int_field(value, "feed timeout");
    } else if (field == "max_retries") {
      f.max_retries = static_cast<int>(parse_int_field(value, "feed retries"));
    } else if (field.starts_with("header.")) {
      f.headers[field.substr(7)] = value;
    } else {
      raise(errc::fatal_config, "unknown feed field '" + field + "'");
    }
  }
  std::vector<FeedConfig> out;
  for (auto& [id, f] : feeds) {
    if (f.url.empty()) raise(errc::fatal_config, "feed '" + id + "' has no url");
    out.push_back(std::move(f));
  }
  return out;
}

// Accepts an endpoints CSV, an OD CSV or a ground-truth CSV and returns
// endpoints either way, so `evaluate` can take any pipeline output.
std::vector<TripEndpoint> read_endpoints_any(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::storage_io, "cannot open " + path.string());
  std::string header;
  std::getline(in, header);
  in.close();
  if (header.starts_with("kind,lat,")) return read_endpoints_csv(path);
  if (header.starts_with("o_lat,")) return od_to_endpoints(read_od_csv(path));
  if (header.starts_with("kind,o_lat,")) {
    std::vector<TripEndpoint> endpoints;
    for (const auto& t : read_ground_truth_csv(path)) {
      endpoints.push_back({EndpointKind::Origin, t.origin.lat, t.origin.lon,
                           t.origin_t, "truth", SourceAlgorithm::Static});
      endpoints.push_back({EndpointKind::Destination, t.destination.lat,
                           t.destination.lon, t.destination_t, "truth",
                           SourceAlgorithm::Static});
    }
    return endpoints;
  }
  raise(errc::corrupt_record,
        path.string() + ": unrecognized CSV header '" + header + "'");
}

// "100..1000:100" (inclusive range with step) or a comma list like "400" or
// "100,250,400".
std::vector<double> parse_cell_sizes(const std::string& spec) {
  std::vector<double> sizes;
  auto range_sep = spec.find("..");
  if (range_sep != std::string::npos) {
    auto step_sep = spec.find(':', range_sep);
    if (step_sep == std::string::npos) {
      raise(errc::invalid_config,
            "--cell-sizes range needs a step, e.g. 100..1000:100");
    }
    const double lo = parse_double_field(spec.substr(0, range_sep), "cell size");
    const double hi = parse_double_field(
        spec.substr(range_sep + 2, step_sep - range_sep - 2), "cell size");
    const double step =
        parse_double_field(spec.substr(step_sep + 1), "cell size step");
    if (!(lo > 0) || !(step > 0) || hi < lo) {
      raise(errc::invalid_config, "bad --cell-sizes range '" + spec + "'");
    }
    for (double s = lo; s <= hi + 1e-9; s += step) sizes.push_back(s);
  } else {
    for (auto field : split_csv(spec)) {
      sizes.push_back(parse_double_field(field, "cell size"));
    }
  }
  if (sizes.empty()) raise(errc::invalid_config, "--cell-sizes is empty");
  return sizes;
}

void clear_feed_dir(const fs::path& root, const std::string& feed_id) {
  std::error_code ec;
  fs::remove_all(root / feed_id, ec);
  if (ec) {
    raise(errc::storage_io,
          "cannot clear " + (root / feed_id).string() + ": " + ec.message());
  }
}

int cmd_scrape(const std::string& config_path,
               const std::vector<std::string>& overrides,
               const std::string& out_dir, std::int64_t duration_s) {
  const KvConfig kv = load_config(config_path, overrides);
  const auto feeds = feeds_from_config(kv);
  if (feeds.empty()) raise(errc::fatal_config, "no feeds configured");
  for (const auto& f : feeds) {
    std::cout << "polling " << f.feed_id << " every " << f.poll_interval_s()
              << " s from " << f.url << "\n";
  }

  SnapshotStore store(out_dir);
  std::atomic<bool> stop{false};
  std::vector<PollStats> stats(feeds.size());
  std::vector<std::thread> workers;
  workers.reserve(feeds.size());
  for (std::size_t i = 0; i < feeds.size(); ++i) {
    workers.emplace_back([&, i] {
      try {
        stats[i] = poll_loop(feeds[i], store, stop);
      } catch (const error& e) {
        std::cerr << "[scrape] " << feeds[i].feed_id << ": " << e.what() << "\n";
        stop.store(true);
      }
    });
  }

  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::seconds(duration_s);
  while (!stop.load() && !g_interrupted.load() &&
         (duration_s <= 0 || std::chrono::steady_clock::now() < deadline)) {
    std::this_thread::sleep_for(std::chrono::milliseconds(200));
  }
  stop.store(true);
  for (auto& w : workers) w.join();

  for (std::size_t i = 0; i < feeds.size(); ++i) {
    std::cout << feeds[i].feed_id << ": stored " << stats[i].stored
              << ", duplicates " << stats[i].duplicates << ", failed cycles "
              << stats[i].failures << "\n";
  }
  return 0;
}

int cmd_simulate(const std::string& config_path,
                 const std::vector<std::string>& overrides,
                 const std::string& out_dir) {
  const SimConfig config = SimConfig::from_kv(load_config(config_path, overrides));
  const SimResult result = simulate(config);

  SnapshotStore store(out_dir);
  clear_feed_dir(store.root(), config.feed_id);
  for (const auto& snap : result.snapshots) {
    store.append(snap, snap.captured_at);
  }
  write_atomic(fs::path(out_dir) / "ground_truth.csv", [&](const fs::path& tmp) {
    write_ground_truth_csv(tmp, result.trips);
  });

  std::map<std::string, std::int64_t> by_kind;
  for (const auto& t : result.trips) ++by_kind[to_string(t.kind)];
  std::cout << "wrote " << result.snapshots.size() << " snapshots for feed '"
            << config.feed_id << "' to " << out_dir << "\n";
  std::cout << "ground truth: " << result.trips.size() << " trips";
  for (const auto& [kind, count] : by_kind) {
    std::cout << ", " << kind << " " << count;
  }
  std::cout << "; launched " << result.vehicles_launched << ", removed "
            << result.vehicles_removed << "\n";
  return 0;
}

int cmd_regen(const std::string& in_dir, const std::string& strategy,
              std::int64_t interval_s, std::uint64_t seed,
              const std::string& out_dir) {
  if (strategy != "resetting" && strategy != "dynamic") {
    raise(errc::invalid_config, "--strategy must be resetting or dynamic");
  }
  const auto streams = load_streams(in_dir);
  if (streams.empty()) raise(errc::corrupt_record, "no snapshots under " + in_dir);

  SnapshotStore store(out_dir);
  for (const auto& [feed_id, stream] : streams) {
    const auto rewritten = strategy == "resetting"
                               ? regen_resetting(stream, seed)
                               : regen_dynamic(stream, interval_s, seed);
    clear_feed_dir(store.root(), feed_id);
    for (const auto& snap : rewritten) store.append(snap, snap.captured_at);
    std::cout << feed_id << ": rewrote ids in " << rewritten.size()
              << " snapshots (" << strategy << ")\n";
  }
  return 0;
}

int cmd_infer(const std::string& in_dir, const std::string& algorithm,
              const std::string& config_path,
              const std::vector<std::string>& overrides,
              const std::string& out_file, bool no_filter) {
  const InferenceConfig config =
      InferenceConfig::from_kv(load_config(config_path, overrides));
  const auto streams = load_streams(in_dir);
  if (streams.empty()) raise(errc::corrupt_record, "no snapshots under " + in_dir);

  if (algorithm == "static") {
    std::vector<TripOD> trips;
    for (const auto& [feed_id, stream] : streams) {
      auto part = infer_static(stream, config);
      trips.insert(trips.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
    }
    std::size_t kept = trips.size();
    if (!no_filter) {
      auto filtered = filter_trips(trips, config.filter);
      std::map<std::string, std::size_t> reasons;
      for (const auto& r : filtered.rejected) ++reasons[to_string(r.reason)];
      trips = std::move(filtered.kept);
      kept = trips.size();
      std::cout << "filter: kept " << kept;
      for (const auto& [reason, count] : reasons) {
        std::cout << ", rejected(" << reason << ") " << count;
      }
      std::cout << "\n";
    }
    write_atomic(out_file,
                 [&](const fs::path& tmp) { write_od_csv(tmp, trips); });
    std::cout << "inferred " << kept << " trip origins and " << kept
              << " trip destinations (linked)\n";
    std::cout << "wrote " << out_file << "\n";
    return 0;
  }

  if (algorithm != "resetting" && algorithm != "dynamic") {
    raise(errc::invalid_config, "--algorithm must be static|resetting|dynamic");
  }
  std::vector<TripEndpoint> endpoints;
  for (const auto& [feed_id, stream] : streams) {
    auto part = algorithm == "resetting" ? infer_resetting(stream, config)
                                         : infer_dynamic(stream, config);
    endpoints.insert(endpoints.end(), std::make_move_iterator(part.begin()),
                     std::make_move_iterator(part.end()));
  }
  std::size_t origins = 0;
  for (const auto& e : endpoints) origins += e.kind == EndpointKind::Origin;
  write_atomic(out_file,
               [&](const fs::path& tmp) { write_endpoints_csv(tmp, endpoints); });
  std::cout << "inferred " << origins << " trip origins and "
            << (endpoints.size() - origins)
            << " trip destinations (unlinked; trip filter applies to linked "
               "OD pairs only)\n";
  std::cout << "wrote " << out_file << "\n";
  return 0;
}

std::string format_report_row(const EvaluationReport& r) {
  std::string row = dtos(r.grid.cell_size_m) + " m  " + to_string(r.kind);
  row.resize(std::max<std::size_t>(row.size(), 24), ' ');
  row += "R2=" + (r.r_squared ? dtos(*r.r_squared) : std::string("undefined"));
  row += "  MAE=" + dtos(r.mae);
  row += "  SAE=" + dtos(r.sae);
  if (r.sae_over_total) {
    row += "  SAE/total=" + dtos(*r.sae_over_total * 100.0) + "%";
  }
  return row;
}

int cmd_evaluate(const std::string& benchmark_file,
                 const std::string& candidate_file,
                 const std::string& cell_sizes_spec, const std::string& bbox_spec,
                 const std::string& out_dir, bool include_zero_cells) {
  const auto benchmark = read_endpoints_any(benchmark_file);
  const auto candidate = read_endpoints_any(candidate_file);
  const auto cell_sizes = parse_cell_sizes(cell_sizes_spec);

  BBox box;
  if (bbox_spec == "auto") {
    box = envelope_of(benchmark, candidate);
  } else {
    auto f = split_csv(bbox_spec);
    if (f.size() != 4) {
      raise(errc::invalid_config,
            "--bbox expects auto or lat_min,lon_min,lat_max,lon_max");
    }
    box = {parse_double_field(f[0], "bbox"), parse_double_field(f[1], "bbox"),
           parse_double_field(f[2], "bbox"), parse_double_field(f[3], "bbox")};
    if (box.is_empty()) raise(errc::invalid_config, "--bbox is empty");
  }

  const auto reports = sensitivity_sweep(benchmark, candidate, box, cell_sizes);
  fs::create_directories(out_dir);
  write_atomic(fs::path(out_dir) / "sweep.csv", [&](const fs::path& tmp) {
    write_sweep_csv(tmp, reports);
  });
  for (const auto& r : reports) {
    const std::string name = std::string("error_") + to_string(r.kind) + "_" +
                             dtos(r.grid.cell_size_m) + "m.geojson";
    write_text_atomic(fs::path(out_dir) / name,
                      error_surface_geojson(r, include_zero_cells));
  }

  std::cout << "cell size sweep (" << benchmark.size() << " benchmark / "
            << candidate.size() << " candidate endpoints):\n";
  for (const auto& r : reports) {
    std::cout << "  " << format_report_row(r) << "\n";
  }
  bool printed_header = false;
  for (const auto& r : reports) {
    if (r.grid.cell_size_m == 400.0) {
      if (!printed_header) {
        std::cout << "at 400 m cells:\n";
        printed_header = true;
      }
      std::cout << "  ** " << format_report_row(r) << "\n";
    }
  }
  std::cout << "wrote " << (fs::path(out_dir) / "sweep.csv").string()
            << " and error surfaces\n";
  return 0;
}

int cmd_export_temporal(const std::string& in_file, const std::string& bucket,
                        const std::string& out_file) {
  if (bucket != "hour") {
    raise(errc::invalid_config, "--bucket supports only 'hour'");
  }
  const auto endpoints = read_endpoints_any(in_file);
  // vendor -> kind -> hour-of-week (0 = Sunday 00:00 UTC) -> count
  std::map<std::string, std::map<EndpointKind, std::vector<std::int64_t>>> counts;
  for (const auto& e : endpoints) {
    auto& per_kind = counts[e.vendor];
    auto& hours = per_kind[e.kind];
    if (hours.empty()) hours.assign(168, 0);
    std::time_t t = static_cast<std::time_t>(e.at);
    std::tm tm{};
    gmtime_r(&t, &tm);
    ++hours[static_cast<std::size_t>(tm.tm_wday * 24 + tm.tm_hour)];
  }
  write_atomic(out_file, [&](const fs::path& tmp) {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(errc::storage_io, "cannot open " + tmp.string() + " for write");
    out << "vendor,kind,hour_of_week,count\n";
    for (const auto& [vendor, per_kind] : counts) {
      for (const auto& [kind, hours] : per_kind) {
        for (std::size_t h = 0; h < hours.size(); ++h) {
          out << vendor << ',' << to_string(kind) << ',' << h << ','
              << hours[h] << '\n';
        }
      }
    }
    if (!out.flush()) raise(errc::storage_io, "short write to " + tmp.string());
  });
  std::cout << "wrote hour-of-week counts for " << counts.size()
            << " vendor(s) to " << out_file << "\n";
  return 0;
}

int cmd_export_density(const std::string& in_file, double cell_size_m,
                       const std::string& out_file) {
  const auto endpoints = read_endpoints_any(in_file);
  if (endpoints.empty()) raise(errc::corrupt_record, "no endpoints in " + in_file);
  BBox box = BBox::empty();
  std::int64_t t_min = endpoints.front().at;
  std::int64_t t_max = t_min;
  for (const auto& e : endpoints) {
    box.expand(e.pos());
    t_min = std::min(t_min, e.at);
    t_max = std::max(t_max, e.at);
  }
  double days = static_cast<double>(t_max - t_min) / 86400.0;
  if (days <= 0.0) days = 1.0;  // single-instant input: report per-event density

  const GridSpec grid = GridSpec::cover(box, cell_size_m);
  const auto origins = aggregate(endpoints, grid, EndpointKind::Origin);
  const auto destinations = aggregate(endpoints, grid, EndpointKind::Destination);
  const double km2 = (cell_size_m / 1000.0) * (cell_size_m / 1000.0);

  using json = nlohmann::ordered_json;
  json features = json::array();
  for (std::int64_t i = 0; i < grid.n_cells(); ++i) {
    const auto o = origins.counts[static_cast<std::size_t>(i)];
    const auto d = destinations.counts[static_cast<std::size_t>(i)];
    if (o == 0 && d == 0) continue;
    const auto bounds = grid.cell_bounds(i);
    json ring = json::array();
    ring.push_back({bounds.sw.lon, bounds.sw.lat});
    ring.push_back({bounds.ne.lon, bounds.sw.lat});
    ring.push_back({bounds.ne.lon, bounds.ne.lat});
    ring.push_back({bounds.sw.lon, bounds.ne.lat});
    ring.push_back({bounds.sw.lon, bounds.sw.lat});
    features.push_back(
        {{"type", "Feature"},
         {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({ring})}}},
         {"properties",
          {{"row", i / grid.n_cols},
           {"col", i % grid.n_cols},
           {"origin_count", o},
           {"destination_count", d},
           {"origins_per_day_km2", static_cast<double>(o) / (days * km2)},
           {"destinations_per_day_km2", static_cast<double>(d) / (days * km2)}}}});
  }
  const std::size_t n_cells_written = features.size();
  json fc = {{"type", "FeatureCollection"},
             {"properties",
              {{"cell_size_m", cell_size_m},
               {"days", days},
               {"density_unit", "trips per day per km^2"}}},
             {"features", std::move(features)}};
  write_text_atomic(out_file, fc.dump());
  std::cout << "wrote " << n_cells_written << " cells to " << out_file << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, handle_sigint);

  CLI::App app{"GBFS trip origin/destination inference toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_path, in_path, strategy = "resetting";
  std::string algorithm = "static", benchmark_file, candidate_file;
  std::string cell_sizes = "100..1000:100", bbox_spec = "auto", bucket = "hour";
  std::vector<std::string> overrides;
  std::int64_t duration = 0, interval = 1800;
  std::uint64_t seed = 1;
  double cell_size = 400.0;
  bool no_filter = false, include_zero_cells = false;

  auto* scrape = app.add_subcommand("scrape", "poll feeds into an NDJSON archive");
  scrape->add_option("--config", config_path, "feed config file")->required();
  scrape->add_option("--set", overrides, "override config key=value");
  scrape->add_option("--out", out_path, "archive directory")->required();
  scrape->add_option("--duration", duration,
                     "seconds to run (0 = until interrupted)");

  auto* simulate = app.add_subcommand("simulate",
                                      "generate a synthetic fleet stream");
  simulate->add_option("--config", config_path, "simulation config file");
  simulate->add_option("--set", overrides, "override config key=value");
  simulate->add_option("--out", out_path, "output directory")->required();

  auto* regen = app.add_subcommand("regen-ids",
                                   "rewrite static ids as resetting/dynamic");
  regen->add_option("--in", in_path, "input archive directory")->required();
  regen->add_option("--strategy", strategy, "resetting or dynamic")->required();
  regen->add_option("--interval", interval, "dynamic reset interval, seconds");
  regen->add_option("--seed", seed, "id generator seed");
  regen->add_option("--out", out_path, "output archive directory")->required();

  auto* infer = app.add_subcommand("infer", "infer trips or trip endpoints");
  infer->add_option("--in", in_path, "input archive directory")->required();
  infer->add_option("--algorithm", algorithm, "static|resetting|dynamic");
  infer->add_option("--config", config_path, "inference config file");
  infer->add_option("--set", overrides, "override config key=value");
  double scrape_interval_flag = 0, buffer_flag = -1, gap_factor_flag = 0;
  infer->add_option("--scrape-interval", scrape_interval_flag,
                    "nominal snapshot interval, seconds");
  infer->add_option("--buffer", buffer_flag, "dynamic matching buffer, meters");
  infer->add_option("--gap-factor", gap_factor_flag,
                    "gap threshold as a multiple of the interval");
  infer->add_option("--out", out_path, "output CSV")->required();
  infer->add_flag("--no-filter", no_filter, "skip the trip plausibility filter");

  auto* evaluate = app.add_subcommand("evaluate",
                                      "score candidate endpoints on a grid");
  evaluate->add_option("--benchmark", benchmark_file, "benchmark CSV")->required();
  evaluate->add_option("--candidate", candidate_file, "candidate CSV")->required();
  evaluate->add_option("--cell-sizes", cell_sizes,
                       "e.g. 100..1000:100 or 250,400");
  evaluate->add_option("--bbox", bbox_spec,
                       "auto or lat_min,lon_min,lat_max,lon_max");
  evaluate->add_option("--out", out_path, "output directory")->required();
  evaluate->add_flag("--include-zero-cells", include_zero_cells,
                     "keep zero-error cells in GeoJSON surfaces");

  auto* temporal = app.add_subcommand("export-temporal",
                                      "hour-of-week endpoint counts per vendor");
  temporal->add_option("--in", in_path, "endpoints/OD CSV")->required();
  temporal->add_option("--bucket", bucket, "bucket size (hour)");
  temporal->add_option("--out", out_path, "output CSV")->required();

  auto* density = app.add_subcommand("export-density",
                                     "per-cell endpoint density GeoJSON");
  density->add_option("--in", in_path, "endpoints/OD CSV")->required();
  density->add_option("--cell-size", cell_size, "cell size, meters");
  density->add_option("--out", out_path, "output GeoJSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (scrape->parsed()) {
      return cmd_scrape(config_path, overrides, out_path, duration);
    }
    if (simulate->parsed()) {
      return cmd_simulate(config_path, overrides, out_path);
    }
    if (regen->parsed()) {
      return cmd_regen(in_path, strategy, interval, seed, out_path);
    }
    if (infer->parsed()) {
      if (scrape_interval_flag > 0) {
        overrides.push_back("scrape_interval_s=" + dtos(scrape_interval_flag));
      }
      if (buffer_flag >= 0) {
        overrides.push_back("buffer_m=" + dtos(buffer_flag));
      }
      if (gap_factor_flag > 0) {
        overrides.push_back("gap_factor=" + dtos(gap_factor_flag));
      }
      return cmd_infer(in_path, algorithm, config_path, overrides, out_path,
                       no_filter);
    }
    if (evaluate->parsed()) {
      return cmd_evaluate(benchmark_file, candidate_file, cell_sizes, bbox_spec,
                          out_path, include_zero_cells);
    }
    if (temporal->parsed()) {
      return cmd_export_temporal(in_path, bucket, out_path);
    }
    if (density->parsed()) {
      return cmd_export_density(in_path, cell_size, out_path);
    }
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
