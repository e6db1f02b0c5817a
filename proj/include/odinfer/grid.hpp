#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "odinfer/errors.hpp"
#include "odinfer/geo.hpp"

namespace odinfer {

// Regular square grid on a local equirectangular plane, anchored at the
// southwest corner of the covered area. Cells are half-open: inclusive on
// the south/west edge, exclusive on the north/east edge, so every in-bounds
// point maps to exactly one cell. Coordinates landing within 1e-9 cell
// units of an edge snap to that edge before the half-open rule applies,
// keeping edge assignment stable under floating-point noise.
struct GridSpec {
  GeoPoint origin_corner;  // southwest
  double cell_size_m{};
  std::int64_t n_rows{};
  std::int64_t n_cols{};
  double ref_lat_deg{};  // projection reference latitude

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

  // Smallest grid whose cells cover the box; the north/east cells may
  // overhang the boundary.
  static GridSpec cover(const BBox& box, double cell_size_m) {
    if (!(cell_size_m > 0)) raise(errc::invalid_config, "cell size must be positive");
    if (box.is_empty()) raise(errc::invalid_config, "empty bounding box");
    GridSpec g;
    g.origin_corner = {box.lat_min, box.lon_min};
    g.cell_size_m = cell_size_m;
    g.ref_lat_deg = box.mid_lat();
    const LocalProjection proj(g.origin_corner, g.ref_lat_deg);
    const XY ne = proj.to_xy({box.lat_max, box.lon_max});
    g.n_rows = static_cast<std::int64_t>(std::floor(ne.y / cell_size_m)) + 1;
    g.n_cols = static_cast<std::int64_t>(std::floor(ne.x / cell_size_m)) + 1;
    return g;
  }

  std::int64_t n_cells() const { return n_rows * n_cols; }

  LocalProjection projection() const {
    return LocalProjection(origin_corner, ref_lat_deg);
  }

  // nullopt when the point lies outside the grid envelope.
  std::optional<std::int64_t> cell_index(GeoPoint p) const {
    const XY q = projection().to_xy(p);
    const std::int64_t col = axis_index(q.x);
    const std::int64_t row = axis_index(q.y);
    if (row < 0 || row >= n_rows || col < 0 || col >= n_cols)
      return std::nullopt;
    return row * n_cols + col;
  }

  struct CellBounds {
    GeoPoint sw;
    GeoPoint ne;
  };
  CellBounds cell_bounds(std::int64_t index) const {
    const std::int64_t row = index / n_cols;
    const std::int64_t col = index % n_cols;
    const LocalProjection proj = projection();
    return {proj.to_geo({static_cast<double>(col) * cell_size_m,
                         static_cast<double>(row) * cell_size_m}),
            proj.to_geo({static_cast<double>(col + 1) * cell_size_m,
                         static_cast<double>(row + 1) * cell_size_m})};
  }

 private:
  std::int64_t axis_index(double meters) const {
    const double q = meters / cell_size_m;
    const double r = std::round(q);
    if (std::abs(q - r) < 1e-9) return static_cast<std::int64_t>(r);
    return static_cast<std::int64_t>(std::floor(q));
  }
};

}  // namespace odinfer
