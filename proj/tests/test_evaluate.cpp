#include "odinfer/evaluate.hpp"

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "json.hpp"
#include "odinfer/errors.hpp"

using namespace odinfer;
namespace fs = std::filesystem;

namespace {

GridSpec row_grid(std::int64_t n_cols) {
  GridSpec g;
  g.origin_corner = {38.80, -77.05};
  g.cell_size_m = 100.0;
  g.n_rows = 1;
  g.n_cols = n_cols;
  g.ref_lat_deg = 38.8005;
  return g;
}

GridCounts counts_of(const GridSpec& g, std::vector<std::int64_t> counts,
                     EndpointKind kind = EndpointKind::Origin) {
  GridCounts c;
  c.grid = g;
  c.kind = kind;
  c.counts = std::move(counts);
  return c;
}

GridSpec ten_by_ten() {
  GridSpec g;
  g.origin_corner = {38.8000, -77.0500};
  g.cell_size_m = 100.0;
  g.n_rows = 10;
  g.n_cols = 10;
  g.ref_lat_deg = 38.8045;
  return g;
}

TripEndpoint ep(EndpointKind kind, GeoPoint p) {
  TripEndpoint e;
  e.kind = kind;
  e.lat = p.lat;
  e.lon = p.lon;
  e.at = 0;
  e.vendor = "t";
  e.source_algorithm = SourceAlgorithm::Static;
  return e;
}

// Point x meters east / y meters north of a grid's southwest corner.
GeoPoint offset(const GridSpec& g, double x, double y) {
  return g.projection().to_geo({x, y});
}

}  // namespace

TEST_CASE("score reproduces the hand-computed example") {
  const GridSpec g = row_grid(3);
  const auto r = score(counts_of(g, {1, 2, 3}), counts_of(g, {1, 2, 4}));
  REQUIRE(r.r_squared.has_value());
  CHECK(*r.r_squared == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.mae == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(r.sae == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.n_cells == 3);
  CHECK(r.total_benchmark == 6);
  REQUIRE(r.sae_over_total.has_value());
  CHECK(*r.sae_over_total == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(r.per_cell_abs_error == std::vector<std::int64_t>{0, 0, 1});
  CHECK(r.kind == EndpointKind::Origin);
}

TEST_CASE("predicting the mean everywhere scores exactly zero") {
  const GridSpec g = row_grid(3);
  const auto r = score(counts_of(g, {1, 2, 3}), counts_of(g, {2, 2, 2}));
  REQUIRE(r.r_squared.has_value());
  CHECK(*r.r_squared == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.mae == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(r.sae == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("a perfect candidate scores one with zero error") {
  const GridSpec g = row_grid(4);
  const auto b = counts_of(g, {5, 0, 2, 9});
  const auto r = score(b, b);
  REQUIRE(r.r_squared.has_value());
  CHECK(*r.r_squared == 1.0);
  CHECK(r.mae == 0.0);
  CHECK(r.sae == 0.0);
  CHECK(*r.sae_over_total == 0.0);
}

TEST_CASE("a flat benchmark leaves r-squared undefined but not the errors") {
  const GridSpec g = row_grid(3);
  const auto r = score(counts_of(g, {2, 2, 2}), counts_of(g, {1, 2, 3}));
  CHECK_FALSE(r.r_squared.has_value());
  CHECK(r.mae == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(r.sae == doctest::Approx(2.0).epsilon(1e-12));
  REQUIRE(r.sae_over_total.has_value());
  CHECK(*r.sae_over_total == doctest::Approx(2.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("an all-zero benchmark has no defined ratios at all") {
  const GridSpec g = row_grid(3);
  const auto r = score(counts_of(g, {0, 0, 0}), counts_of(g, {1, 0, 2}));
  CHECK_FALSE(r.r_squared.has_value());
  CHECK_FALSE(r.sae_over_total.has_value());
  CHECK(r.sae == 3.0);
  CHECK(r.total_benchmark == 0);
}

TEST_CASE("mismatched grids or kinds refuse to score") {
  const GridSpec g = row_grid(3);
  GridSpec other = g;
  other.n_cols = 4;
  auto code_of = [](auto fn) -> std::optional<errc> {
    try {
      fn();
    } catch (const error& e) {
      return e.code();
    }
    return std::nullopt;
  };
  CHECK(code_of([&] {
          score(counts_of(g, {1, 2, 3}), counts_of(other, {1, 2, 3, 4}));
        }) == errc::grid_mismatch);
  CHECK(code_of([&] {
          score(counts_of(g, {1, 2, 3}),
                counts_of(g, {1, 2, 3}, EndpointKind::Destination));
        }) == errc::grid_mismatch);
  GridSpec shifted = g;
  shifted.origin_corner.lat += 1e-6;
  CHECK(code_of([&] {
          score(counts_of(g, {1, 2, 3}), counts_of(shifted, {1, 2, 3}));
        }) == errc::grid_mismatch);
}

TEST_CASE("aggregate bins endpoints, filters kinds, and tallies strays") {
  const GridSpec g = ten_by_ten();
  std::vector<TripEndpoint> eps;
  // three origins in cell 11 (row 1, col 1), one in cell 0
  for (int i = 0; i < 3; ++i)
    eps.push_back(ep(EndpointKind::Origin, offset(g, 150.0, 150.0)));
  eps.push_back(ep(EndpointKind::Origin, offset(g, 50.0, 50.0)));
  // a destination in cell 11 must not leak into the origin surface
  eps.push_back(ep(EndpointKind::Destination, offset(g, 150.0, 150.0)));
  // west of the grid: counted as out of bounds, not dropped
  eps.push_back(ep(EndpointKind::Origin, offset(g, -5.0, 150.0)));
  // an interior edge point lands in the higher cell (half-open rule)
  eps.push_back(ep(EndpointKind::Origin, offset(g, 100.0, 0.0)));

  const GridCounts c = aggregate(eps, g, EndpointKind::Origin);
  CHECK(c.counts.size() == 100);
  CHECK(c.counts[11] == 3);
  CHECK(c.counts[0] == 1);
  CHECK(c.counts[1] == 1);
  CHECK(c.out_of_bounds == 1);
  CHECK(c.total() == 5);

  const GridCounts d = aggregate(eps, g, EndpointKind::Destination);
  CHECK(d.counts[11] == 1);
  CHECK(d.total() == 1);

  const GridCounts empty = aggregate({}, g, EndpointKind::Origin);
  CHECK(empty.total() == 0);
  CHECK(empty.out_of_bounds == 0);
  CHECK(empty.counts.size() == 100);
}

TEST_CASE("aggregation order does not matter") {
  const GridSpec g = ten_by_ten();
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  std::vector<TripEndpoint> eps;
  for (int i = 0; i < 500; ++i)
    eps.push_back(ep(EndpointKind::Origin, offset(g, u(eng), u(eng))));
  const GridCounts before = aggregate(eps, g, EndpointKind::Origin);
  std::shuffle(eps.begin(), eps.end(), eng);
  const GridCounts after = aggregate(eps, g, EndpointKind::Origin);
  CHECK(before.counts == after.counts);
  CHECK(before.out_of_bounds == after.out_of_bounds);
}

TEST_CASE("sae always equals cell count times mae") {
  const GridSpec g = ten_by_ten();
  std::mt19937_64 eng(11);
  std::uniform_int_distribution<std::int64_t> c(0, 30);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<std::int64_t> y(100), yhat(100);
    for (auto& v : y) v = c(eng);
    for (auto& v : yhat) v = c(eng);
    const auto r = score(counts_of(g, y), counts_of(g, yhat));
    CHECK(r.sae ==
          doctest::Approx(r.mae * static_cast<double>(r.n_cells)).epsilon(1e-12));
    if (r.r_squared) CHECK(*r.r_squared <= 1.0);
  }
}

TEST_CASE("coarse cells hold exactly the sum of their nested fine cells") {
  GridSpec fine = ten_by_ten();
  GridSpec coarse = fine;
  coarse.cell_size_m = 200.0;
  coarse.n_rows = 5;
  coarse.n_cols = 5;

  std::mt19937_64 eng(13);
  std::uniform_real_distribution<double> u(0.0, 999.0);
  std::vector<TripEndpoint> eps;
  for (int i = 0; i < 2000; ++i)
    eps.push_back(ep(EndpointKind::Origin, offset(fine, u(eng), u(eng))));

  const GridCounts cf = aggregate(eps, fine, EndpointKind::Origin);
  const GridCounts cc = aggregate(eps, coarse, EndpointKind::Origin);
  CHECK(cf.total() == cc.total());
  for (std::int64_t row = 0; row < 5; ++row) {
    for (std::int64_t col = 0; col < 5; ++col) {
      std::int64_t sum = 0;
      for (std::int64_t dr = 0; dr < 2; ++dr)
        for (std::int64_t dc = 0; dc < 2; ++dc)
          sum += cf.counts[static_cast<std::size_t>((2 * row + dr) * 10 +
                                                    (2 * col + dc))];
      CHECK(cc.counts[static_cast<std::size_t>(row * 5 + col)] == sum);
    }
  }
}

TEST_CASE("coarsening can only cancel error, never add it") {
  GridSpec fine = ten_by_ten();
  GridSpec coarse = fine;
  coarse.cell_size_m = 200.0;
  coarse.n_rows = 5;
  coarse.n_cols = 5;

  std::mt19937_64 eng(17);
  std::uniform_real_distribution<double> u(0.0, 999.0);
  for (int iter = 0; iter < 20; ++iter) {
    std::vector<TripEndpoint> b, c;
    for (int i = 0; i < 400; ++i) {
      b.push_back(ep(EndpointKind::Origin, offset(fine, u(eng), u(eng))));
      c.push_back(ep(EndpointKind::Origin, offset(fine, u(eng), u(eng))));
    }
    const auto fine_r = score(aggregate(b, fine, EndpointKind::Origin),
                              aggregate(c, fine, EndpointKind::Origin));
    const auto coarse_r = score(aggregate(b, coarse, EndpointKind::Origin),
                                aggregate(c, coarse, EndpointKind::Origin));
    CHECK(coarse_r.sae <= fine_r.sae);
  }
}

TEST_CASE("the envelope is the tight bounding box of both endpoint sets") {
  std::vector<TripEndpoint> b{ep(EndpointKind::Origin, {38.90, -77.02}),
                              ep(EndpointKind::Origin, {38.95, -77.05})};
  std::vector<TripEndpoint> c{ep(EndpointKind::Destination, {38.88, -76.99})};
  const BBox box = envelope_of(b, c);
  CHECK(box.lat_min == 38.88);
  CHECK(box.lat_max == 38.95);
  CHECK(box.lon_min == -77.05);
  CHECK(box.lon_max == -76.99);
  CHECK_THROWS_AS(envelope_of({}, {}), error);
}

TEST_CASE("the sweep emits one report per size and kind over one envelope") {
  std::mt19937_64 eng(19);
  std::uniform_real_distribution<double> lat(38.88, 38.96);
  std::uniform_real_distribution<double> lon(-77.06, -76.98);
  std::vector<TripEndpoint> b, c;
  for (int i = 0; i < 300; ++i) {
    const auto kind = i % 2 == 0 ? EndpointKind::Origin : EndpointKind::Destination;
    b.push_back(ep(kind, {lat(eng), lon(eng)}));
    c.push_back(ep(kind, {lat(eng), lon(eng)}));
  }
  const BBox env = envelope_of(b, c);
  std::vector<double> sizes;
  for (double s = 100.0; s <= 1000.0; s += 100.0) sizes.push_back(s);

  const auto reports = sensitivity_sweep(b, c, env, sizes);
  REQUIRE(reports.size() == 20);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    CHECK(r.grid.cell_size_m == sizes[i / 2]);
    CHECK(r.kind ==
          (i % 2 == 0 ? EndpointKind::Origin : EndpointKind::Destination));
    CHECK(r.grid.origin_corner.lat == env.lat_min);
    CHECK(r.grid.origin_corner.lon == env.lon_min);
    CHECK(r.n_cells == r.grid.n_rows * r.grid.n_cols);
    // nothing is out of bounds when the grid covers the shared envelope
    CHECK(r.total_benchmark == 150);
  }
  CHECK_THROWS_AS(sensitivity_sweep(b, c, env, {}), error);
  CHECK_THROWS_AS(sensitivity_sweep(b, c, env, {100.0, -5.0}), error);
}

TEST_CASE("the sweep csv lists every report and blanks undefined ratios") {
  const GridSpec g = row_grid(3);
  std::vector<EvaluationReport> reports;
  reports.push_back(score(counts_of(g, {1, 2, 3}), counts_of(g, {1, 2, 4})));
  reports.push_back(score(counts_of(g, {0, 0, 0}), counts_of(g, {1, 0, 2})));

  const fs::path path =
      fs::temp_directory_path() /
      ("odinfer_sweep_" + std::to_string(::getpid()) + ".csv");
  write_sweep_csv(path, reports);
  std::ifstream in(path);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line ==
        "cell_size_m,kind,r_squared,mae,sae,sae_over_total,n_cells,"
        "total_benchmark");
  REQUIRE(std::getline(in, line));
  CHECK(line == "100,origin,0.5,0.3333333333333333,1,0.16666666666666666,3,6");
  REQUIRE(std::getline(in, line));
  CHECK(line == "100,origin,,1,3,,3,0");  // both ratios undefined
  CHECK_FALSE(std::getline(in, line));
  fs::remove(path);
}

TEST_CASE("the error surface is valid geojson with closed lon-lat rings") {
  const GridSpec g = ten_by_ten();
  std::vector<TripEndpoint> b{ep(EndpointKind::Origin, offset(g, 150, 150)),
                              ep(EndpointKind::Origin, offset(g, 150, 150)),
                              ep(EndpointKind::Origin, offset(g, 450, 850))};
  std::vector<TripEndpoint> c{ep(EndpointKind::Origin, offset(g, 150, 150))};
  const auto report = score(aggregate(b, g, EndpointKind::Origin),
                            aggregate(c, g, EndpointKind::Origin));
  REQUIRE(report.sae == 2.0);  // one cell short by one, one missed entirely

  const auto parsed = nlohmann::json::parse(error_surface_geojson(report));
  CHECK(parsed["type"] == "FeatureCollection");
  CHECK(parsed["properties"]["kind"] == "origin");
  CHECK(parsed["properties"]["cell_size_m"] == 100.0);
  CHECK(parsed["properties"]["n_cells"] == 100);
  CHECK(parsed["properties"]["sae"] == 2.0);
  REQUIRE(parsed["features"].size() == 2);  // only the two nonzero cells
  for (const auto& f : parsed["features"]) {
    CHECK(f["type"] == "Feature");
    CHECK(f["geometry"]["type"] == "Polygon");
    const auto& ring = f["geometry"]["coordinates"][0];
    REQUIRE(ring.size() == 5);
    CHECK(ring[0] == ring[4]);
    for (const auto& pos : ring) {
      const double lon = pos[0].get<double>();
      const double lat = pos[1].get<double>();
      CHECK(lon < -70.0);  // lon first: the two axes are unmistakable here
      CHECK(lat > 35.0);
    }
    CHECK(f["properties"]["abs_error"].get<std::int64_t>() >= 1);
  }
  const auto& first = parsed["features"][0]["properties"];
  CHECK(first["row"] == 1);
  CHECK(first["col"] == 1);
  const auto& second = parsed["features"][1]["properties"];
  CHECK(second["row"] == 8);
  CHECK(second["col"] == 4);

  const auto all_cells =
      nlohmann::json::parse(error_surface_geojson(report, true));
  CHECK(all_cells["features"].size() == 100);
}
