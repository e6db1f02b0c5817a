#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "odinfer/grid.hpp"
#include "odinfer/types.hpp"

namespace odinfer {

// Per-cell endpoint counts for one kind over one grid.
struct GridCounts {
  GridSpec grid;
  EndpointKind kind{};
  std::vector<std::int64_t> counts;   // row-major, n_rows * n_cols entries
  std::int64_t out_of_bounds{};       // endpoints outside the envelope

  std::int64_t total() const {
    std::int64_t sum = 0;
    for (auto c : counts) sum += c;
    return sum;
  }
};

// R-squared / MAE / SAE of a candidate count surface against a benchmark.
// r_squared is empty when the benchmark is degenerate (all cells equal, so
// the total sum of squares is zero and the ratio is undefined).
struct EvaluationReport {
  GridSpec grid;
  EndpointKind kind{};
  std::optional<double> r_squared;
  double mae{};             // trips per cell
  double sae{};             // trips
  std::optional<double> sae_over_total;  // empty when the benchmark is empty
  std::int64_t n_cells{};
  std::int64_t total_benchmark{};
  std::vector<std::int64_t> per_cell_abs_error;
};

// Bins endpoints of the matching kind into grid cells. Out-of-bounds
// endpoints are tallied, never silently dropped.
GridCounts aggregate(const std::vector<TripEndpoint>& endpoints,
                     const GridSpec& grid, EndpointKind kind);

// Scores candidate against benchmark cell-by-cell. Throws grid_mismatch
// when the two count surfaces use different grids or kinds.
EvaluationReport score(const GridCounts& benchmark, const GridCounts& candidate);

// Smallest box containing every endpoint of both sets.
BBox envelope_of(const std::vector<TripEndpoint>& benchmark,
                 const std::vector<TripEndpoint>& candidate);

// One report per (cell size, kind): origins and destinations scored
// separately on grids sharing the envelope's southwest corner.
std::vector<EvaluationReport> sensitivity_sweep(
    const std::vector<TripEndpoint>& benchmark,
    const std::vector<TripEndpoint>& candidate, const BBox& envelope,
    const std::vector<double>& cell_sizes_m);

// Sweep table CSV:
// cell_size_m,kind,r_squared,mae,sae,sae_over_total,n_cells,total_benchmark
// (undefined ratios serialize as empty fields).
void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<EvaluationReport>& reports);

// GeoJSON FeatureCollection of cell polygons carrying |y_i - yhat_i|.
// Zero-error cells are omitted unless include_zero_cells is set.
std::string error_surface_geojson(const EvaluationReport& report,
                                  bool include_zero_cells = false);

}  // namespace odinfer
