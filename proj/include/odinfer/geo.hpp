#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace odinfer {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEarthRadiusM = 6371000.0;
inline constexpr double kMetersPerDegLat = kEarthRadiusM * kPi / 180.0;
inline constexpr double kMphToMs = 0.44704;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }

struct GeoPoint {
  double lat{};
  double lon{};
  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

// Local planar coordinates, meters east (x) / north (y) of some anchor.
struct XY {
  double x{};
  double y{};
};

inline bool valid_wgs84(GeoPoint p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 &&
         p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

// Planar distance in meters on a local equirectangular projection anchored
// at the midpoint latitude of the two points. At city scale this stays
// within 0.1% of the great-circle distance.
inline double geo_distance(GeoPoint a, GeoPoint b) {
  const double mid_lat = deg2rad(0.5 * (a.lat + b.lat));
  const double dx = deg2rad(b.lon - a.lon) * std::cos(mid_lat) * kEarthRadiusM;
  const double dy = deg2rad(b.lat - a.lat) * kEarthRadiusM;
  return std::hypot(dx, dy);
}

struct BBox {
  double lat_min{};
  double lon_min{};
  double lat_max{};
  double lon_max{};

  bool contains(GeoPoint p) const {
    return p.lat >= lat_min && p.lat <= lat_max && p.lon >= lon_min &&
           p.lon <= lon_max;
  }
  double mid_lat() const { return 0.5 * (lat_min + lat_max); }
  double mid_lon() const { return 0.5 * (lon_min + lon_max); }

  void expand(GeoPoint p) {
    lat_min = std::min(lat_min, p.lat);
    lat_max = std::max(lat_max, p.lat);
    lon_min = std::min(lon_min, p.lon);
    lon_max = std::max(lon_max, p.lon);
  }

  static BBox empty() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {inf, inf, -inf, -inf};
  }
  bool is_empty() const { return lat_min > lat_max || lon_min > lon_max; }
};

// Equirectangular projection with a fixed reference latitude. Unlike
// geo_distance() the scale factor does not depend on the points, so
// distances derived from it form an exact planar metric.
class LocalProjection {
 public:
  LocalProjection(GeoPoint anchor, double ref_lat_deg)
      : anchor_(anchor), cos_ref_(std::cos(deg2rad(ref_lat_deg))) {}

  XY to_xy(GeoPoint p) const {
    return {(p.lon - anchor_.lon) * kMetersPerDegLat * cos_ref_,
            (p.lat - anchor_.lat) * kMetersPerDegLat};
  }
  GeoPoint to_geo(XY q) const {
    return {anchor_.lat + q.y / kMetersPerDegLat,
            anchor_.lon + q.x / (kMetersPerDegLat * cos_ref_)};
  }
  double distance(GeoPoint a, GeoPoint b) const {
    const XY pa = to_xy(a);
    const XY pb = to_xy(b);
    return std::hypot(pb.x - pa.x, pb.y - pa.y);
  }
  GeoPoint anchor() const { return anchor_; }
  double cos_ref() const { return cos_ref_; }

 private:
  GeoPoint anchor_;
  double cos_ref_;
};

}  // namespace odinfer
