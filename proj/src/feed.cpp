#include "odinfer/feed.hpp"

#include <unordered_set>
#include <utility>

#include "json.hpp"

namespace odinfer {

using json = nlohmann::ordered_json;

namespace {

const json& require_field(const json& obj, const char* name,
                          std::string_view context) {
  auto it = obj.find(name);
  if (it == obj.end())
    raise(errc::missing_field,
          std::string(name) + " (in " + std::string(context) + ")");
  return *it;
}

std::int64_t int_field(const json& obj, const char* name,
                       std::string_view context) {
  const json& v = require_field(obj, name, context);
  if (!v.is_number_integer())
    raise(errc::schema_violation, std::string(name) + " must be an integer");
  return v.get<std::int64_t>();
}

std::string bike_id_field(const json& bike) {
  const json& v = require_field(bike, "bike_id", "bike");
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  raise(errc::schema_violation, "bike_id must be a string or integer");
}

double coord_field(const json& bike, const char* name) {
  const json& v = require_field(bike, name, "bike");
  if (!v.is_number())
    raise(errc::schema_violation, std::string(name) + " must be a number");
  return v.get<double>();
}

std::uint8_t flag_field(const json& bike, const char* name) {
  auto it = bike.find(name);
  if (it == bike.end()) return 0;
  if (it->is_boolean()) return it->get<bool>() ? 1 : 0;
  if (it->is_number_integer()) {
    const auto n = it->get<std::int64_t>();
    if (n == 0 || n == 1) return static_cast<std::uint8_t>(n);
  }
  raise(errc::schema_violation, std::string(name) + " must be 0/1 or boolean");
}

Snapshot snapshot_from_json(const json& doc, std::string_view feed_id) {
  Snapshot s;
  s.feed_id = feed_id;
  s.captured_at = int_field(doc, "last_updated", "payload");
  s.ttl = int_field(doc, "ttl", "payload");
  if (s.captured_at <= 0)
    raise(errc::schema_violation, "last_updated must be positive");
  if (s.ttl < 0) raise(errc::schema_violation, "ttl must be non-negative");

  const json& data = require_field(doc, "data", "payload");
  const json& bikes = require_field(data, "bikes", "data");
  if (!bikes.is_array())
    raise(errc::schema_violation, "data.bikes must be an array");

  s.records.reserve(bikes.size());
  std::unordered_set<std::string_view> seen;
  seen.reserve(bikes.size());
  for (const json& bike : bikes) {
    VehicleRecord r;
    r.vehicle_id = bike_id_field(bike);
    if (r.vehicle_id.empty())
      raise(errc::schema_violation, "empty bike_id");
    r.lat = coord_field(bike, "lat");
    r.lon = coord_field(bike, "lon");
    if (!valid_wgs84(r.pos()))
      raise(errc::schema_violation,
            "lat/lon out of range for bike " + r.vehicle_id);
    r.is_reserved = flag_field(bike, "is_reserved");
    r.is_disabled = flag_field(bike, "is_disabled");
    r.observed_at = s.captured_at;
    s.records.push_back(std::move(r));
    if (!seen.insert(s.records.back().vehicle_id).second)
      raise(errc::duplicate_vehicle_id, s.records.back().vehicle_id);
  }
  return s;
}

json snapshot_to_json(const Snapshot& s) {
  json bikes = json::array();
  for (const VehicleRecord& r : s.records) {
    bikes.push_back({{"bike_id", r.vehicle_id},
                     {"lat", r.lat},
                     {"lon", r.lon},
                     {"is_reserved", static_cast<int>(r.is_reserved)},
                     {"is_disabled", static_cast<int>(r.is_disabled)}});
  }
  return json{{"last_updated", s.captured_at},
              {"ttl", s.ttl},
              {"data", {{"bikes", std::move(bikes)}}}};
}

json parse_document(std::string_view raw) {
  json doc = json::parse(raw, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object())
    raise(errc::malformed_json, "payload is not a JSON object");
  return doc;
}

}  // namespace

Snapshot parse_free_bike_status(std::string_view raw, std::string_view feed_id) {
  return snapshot_from_json(parse_document(raw), feed_id);
}

std::string to_wire_json(const Snapshot& s) {
  return snapshot_to_json(s).dump();
}

std::string to_archive_line(const Snapshot& s, std::int64_t received_at) {
  json doc = snapshot_to_json(s);
  doc["feed_id"] = s.feed_id;
  doc["received_at"] = received_at;
  return doc.dump();
}

ArchiveLine parse_archive_line(std::string_view line) {
  const json doc = parse_document(line);
  const json& feed = require_field(doc, "feed_id", "archive line");
  if (!feed.is_string())
    raise(errc::schema_violation, "feed_id must be a string");
  ArchiveLine out;
  out.snapshot = snapshot_from_json(doc, feed.get<std::string>());
  if (auto it = doc.find("received_at"); it != doc.end() && it->is_number_integer())
    out.received_at = it->get<std::int64_t>();
  return out;
}

}  // namespace odinfer
