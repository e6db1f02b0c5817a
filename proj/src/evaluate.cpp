#include "odinfer/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>

#include "json.hpp"
#include "odinfer/errors.hpp"
#include "odinfer/text.hpp"

namespace odinfer {

GridCounts aggregate(const std::vector<TripEndpoint>& endpoints,
                     const GridSpec& grid, EndpointKind kind) {
  GridCounts out;
  out.grid = grid;
  out.kind = kind;
  out.counts.assign(static_cast<std::size_t>(grid.n_cells()), 0);
  for (const auto& e : endpoints) {
    if (e.kind != kind) continue;
    if (auto idx = grid.cell_index(e.pos())) {
      ++out.counts[static_cast<std::size_t>(*idx)];
    } else {
      ++out.out_of_bounds;
    }
  }
  return out;
}

EvaluationReport score(const GridCounts& benchmark, const GridCounts& candidate) {
  if (!(benchmark.grid == candidate.grid) || benchmark.kind != candidate.kind ||
      benchmark.counts.size() != candidate.counts.size()) {
    raise(errc::grid_mismatch,
          "benchmark and candidate use different grids or endpoint kinds");
  }
  const std::size_t n = benchmark.counts.size();
  if (n == 0) raise(errc::grid_mismatch, "cannot score an empty grid");

  EvaluationReport r;
  r.grid = benchmark.grid;
  r.kind = benchmark.kind;
  r.n_cells = static_cast<std::int64_t>(n);
  r.total_benchmark = benchmark.total();
  r.per_cell_abs_error.resize(n);

  double mean = 0.0;
  for (auto y : benchmark.counts) mean += static_cast<double>(y);
  mean /= static_cast<double>(n);

  double ss_tot = 0.0;
  double ss_res = 0.0;
  std::int64_t sae = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = static_cast<double>(benchmark.counts[i]);
    const double yhat = static_cast<double>(candidate.counts[i]);
    ss_tot += (y - mean) * (y - mean);
    ss_res += (y - yhat) * (y - yhat);
    const std::int64_t abs_err = std::abs(benchmark.counts[i] - candidate.counts[i]);
    r.per_cell_abs_error[i] = abs_err;
    sae += abs_err;
  }
  r.sae = static_cast<double>(sae);
  r.mae = r.sae / static_cast<double>(n);
  if (ss_tot > 0.0) r.r_squared = 1.0 - ss_res / ss_tot;
  if (r.total_benchmark > 0) {
    r.sae_over_total = r.sae / static_cast<double>(r.total_benchmark);
  }
  return r;
}

BBox envelope_of(const std::vector<TripEndpoint>& benchmark,
                 const std::vector<TripEndpoint>& candidate) {
  BBox box = BBox::empty();
  for (const auto& e : benchmark) box.expand(e.pos());
  for (const auto& e : candidate) box.expand(e.pos());
  if (box.is_empty()) {
    raise(errc::invalid_config, "no endpoints to derive an envelope from");
  }
  return box;
}

std::vector<EvaluationReport> sensitivity_sweep(
    const std::vector<TripEndpoint>& benchmark,
    const std::vector<TripEndpoint>& candidate, const BBox& envelope,
    const std::vector<double>& cell_sizes_m) {
  if (cell_sizes_m.empty()) {
    raise(errc::invalid_config, "sensitivity sweep needs at least one cell size");
  }
  for (double s : cell_sizes_m) {
    if (!(s > 0)) raise(errc::invalid_config, "cell sizes must be positive");
  }

  struct Entry {
    double size;
    EndpointKind kind;
  };
  std::vector<Entry> entries;
  for (double s : cell_sizes_m) {
    entries.push_back({s, EndpointKind::Origin});
    entries.push_back({s, EndpointKind::Destination});
  }

  std::vector<EvaluationReport> reports(entries.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(entries.size()); ++i) {
    const auto& entry = entries[static_cast<std::size_t>(i)];
    const GridSpec grid = GridSpec::cover(envelope, entry.size);
    reports[static_cast<std::size_t>(i)] =
        score(aggregate(benchmark, grid, entry.kind),
              aggregate(candidate, grid, entry.kind));
  }
  return reports;
}

void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<EvaluationReport>& reports) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(errc::storage_io, "cannot open " + path.string() + " for write");
  out << "cell_size_m,kind,r_squared,mae,sae,sae_over_total,n_cells,"
         "total_benchmark\n";
  for (const auto& r : reports) {
    out << dtos(r.grid.cell_size_m) << ',' << to_string(r.kind) << ',';
    if (r.r_squared) out << dtos(*r.r_squared);
    out << ',' << dtos(r.mae) << ',' << dtos(r.sae) << ',';
    if (r.sae_over_total) out << dtos(*r.sae_over_total);
    out << ',' << r.n_cells << ',' << r.total_benchmark << '\n';
  }
  if (!out.flush()) raise(errc::storage_io, "short write to " + path.string());
}

std::string error_surface_geojson(const EvaluationReport& report,
                                  bool include_zero_cells) {
  using json = nlohmann::ordered_json;
  json features = json::array();
  for (std::size_t i = 0; i < report.per_cell_abs_error.size(); ++i) {
    const std::int64_t abs_err = report.per_cell_abs_error[i];
    if (abs_err == 0 && !include_zero_cells) continue;
    const auto idx = static_cast<std::int64_t>(i);
    const auto bounds = report.grid.cell_bounds(idx);
    json ring = json::array();
    ring.push_back({bounds.sw.lon, bounds.sw.lat});
    ring.push_back({bounds.ne.lon, bounds.sw.lat});
    ring.push_back({bounds.ne.lon, bounds.ne.lat});
    ring.push_back({bounds.sw.lon, bounds.ne.lat});
    ring.push_back({bounds.sw.lon, bounds.sw.lat});
    json feature = {
        {"type", "Feature"},
        {"geometry",
         {{"type", "Polygon"}, {"coordinates", json::array({ring})}}},
        {"properties",
         {{"row", idx / report.grid.n_cols},
          {"col", idx % report.grid.n_cols},
          {"abs_error", abs_err}}}};
    features.push_back(std::move(feature));
  }
  json fc = {{"type", "FeatureCollection"},
             {"properties",
              {{"kind", to_string(report.kind)},
               {"cell_size_m", report.grid.cell_size_m},
               {"n_cells", report.n_cells},
               {"sae", report.sae}}},
             {"features", std::move(features)}};
  return fc.dump();
}

}  // namespace odinfer
