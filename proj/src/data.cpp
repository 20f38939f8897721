#include "fleetplace/data.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fleetplace/errors.hpp"
#include "fleetplace/rng.hpp"

namespace fleetplace {

namespace {

double lerp(double a, double b, double t) { return a + (b - a) * t; }

double clamp_to(double v, double lo, double hi) {
  return std::min(hi, std::max(lo, v));
}

GeoPoint sample_point(Rng& rng, const BoundingBox& box,
                      const std::vector<GeoPoint>& centers,
                      const PoolShape& shape) {
  if (!centers.empty() && uniform_unit(rng) < shape.urban_fraction) {
    const auto c = centers[uniform_below(rng, centers.size())];
    const double lat = c.lat_deg + shape.cluster_stddev_deg * standard_normal(rng);
    const double lon = c.lon_deg + shape.cluster_stddev_deg * standard_normal(rng);
    return {clamp_to(lat, box.lat_min, box.lat_max),
            clamp_to(lon, box.lon_min, box.lon_max)};
  }
  return {lerp(box.lat_min, box.lat_max, uniform_unit(rng)),
          lerp(box.lon_min, box.lon_max, uniform_unit(rng))};
}

// Round-trippable decimal representation of a double.
std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

struct CsvReader {
  std::ifstream in;
  std::string path;
  int line_no = 0;

  explicit CsvReader(const std::string& p) : in(p), path(p) {
    if (!in) throw Error("cannot open " + p);
  }

  bool next_row(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line == "\r") continue;
      fields = split_fields(line);
      return true;
    }
    return false;
  }
};

int parse_int(const std::string& s, int line, int col) {
  int value = 0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ParseError(line, col, "expected integer, got '" + s + "'");
  return value;
}

double parse_double(const std::string& s, int line, int col) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, col, "expected number, got '" + s + "'");
  }
}

void expect_fields(const std::vector<std::string>& fields, std::size_t n,
                   int line) {
  if (fields.size() != n)
    throw ParseError(line, static_cast<int>(fields.size()),
                     "expected " + std::to_string(n) + " fields, got " +
                         std::to_string(fields.size()));
}

}  // namespace

FacilityPool synthesize_pool(std::uint64_t seed, const BoundingBox& box,
                             const PoolCounts& counts,
                             const PoolShape& shape) {
  if (counts.aerodromes <= 0 || counts.helipads < 0 || counts.health_sites <= 0)
    throw PoolTooSmallError("pool counts must be positive");

  Rng rng(seed);
  std::vector<GeoPoint> centers;
  centers.reserve(static_cast<std::size_t>(std::max(0, shape.clusters)));
  for (int c = 0; c < shape.clusters; ++c) {
    centers.push_back({lerp(box.lat_min, box.lat_max, uniform_unit(rng)),
                       lerp(box.lon_min, box.lon_max, uniform_unit(rng))});
  }

  FacilityPool pool;
  // Health sites first: hospital helipads sample from them below.
  for (int i = 0; i < counts.health_sites; ++i)
    pool.health_sites.push_back(sample_point(rng, box, centers, shape));
  for (int i = 0; i < counts.aerodromes; ++i)
    pool.aerodromes.push_back(sample_point(rng, box, centers, shape));
  for (int i = 0; i < counts.helipads; ++i) {
    if (uniform_unit(rng) < shape.helipad_site_fraction)
      pool.helipads.push_back(
          pool.health_sites[uniform_below(rng, pool.health_sites.size())]);
    else
      pool.helipads.push_back(sample_point(rng, box, centers, shape));
  }
  return pool;
}

Instance generate_instance(const FacilityPool& pool, int n_missions,
                           double rotary_only_fraction, std::uint64_t seed,
                           int rotary_vehicles, int fixed_vehicles) {
  if (pool.health_sites.size() < 2)
    throw PoolTooSmallError("need at least two health sites");
  if (static_cast<int>(pool.aerodromes.size()) < fixed_vehicles)
    throw PoolTooSmallError("need at least one aerodrome per fixed-wing vehicle");
  if (static_cast<int>(pool.aerodromes.size() + pool.helipads.size()) <
      rotary_vehicles + fixed_vehicles)
    throw PoolTooSmallError("fewer bases than vehicles");
  if (rotary_vehicles + fixed_vehicles <= 0)
    throw PoolTooSmallError("fleet must not be empty");

  Rng rng(seed);
  Instance inst;

  int next_id = 0;
  for (const GeoPoint& p : pool.aerodromes)
    inst.bases.push_back({next_id++, BaseKind::Aerodrome, p});
  for (const GeoPoint& p : pool.helipads)
    inst.bases.push_back({next_id++, BaseKind::Helipad, p});

  next_id = 0;
  for (int i = 0; i < rotary_vehicles; ++i)
    inst.fleet.push_back({next_id++, VehicleKind::RotaryWing});
  for (int j = 0; j < fixed_vehicles; ++j)
    inst.fleet.push_back({next_id++, VehicleKind::FixedWing});

  const auto n_sites = pool.health_sites.size();
  for (int m = 0; m < n_missions; ++m) {
    const auto pick = uniform_below(rng, n_sites);
    auto drop = uniform_below(rng, n_sites - 1);
    if (drop >= pick) ++drop;  // distinct sites
    const bool rotary_only = uniform_unit(rng) < rotary_only_fraction;
    inst.missions.push_back({m, pool.health_sites[pick],
                             pool.health_sites[drop], rotary_only});
  }

  validate_instance(inst);
  return inst;
}

Instance load_instance(const std::string& bases_csv,
                       const std::string& missions_csv,
                       const std::string& fleet_csv) {
  Instance inst;
  std::vector<std::string> f;

  {
    CsvReader r(bases_csv);
    if (!r.next_row(f)) throw ParseError(1, 1, "missing header in " + bases_csv);
    while (r.next_row(f)) {
      expect_fields(f, 4, r.line_no);
      Base b;
      b.id = parse_int(f[0], r.line_no, 1);
      if (f[1] == "aerodrome") {
        b.kind = BaseKind::Aerodrome;
      } else if (f[1] == "helipad") {
        b.kind = BaseKind::Helipad;
      } else {
        throw ParseError(r.line_no, 2, "unknown base kind '" + f[1] + "'");
      }
      b.location = {parse_double(f[2], r.line_no, 3),
                    parse_double(f[3], r.line_no, 4)};
      inst.bases.push_back(b);
    }
  }
  {
    CsvReader r(missions_csv);
    if (!r.next_row(f)) throw ParseError(1, 1, "missing header in " + missions_csv);
    while (r.next_row(f)) {
      expect_fields(f, 6, r.line_no);
      Mission m;
      m.id = parse_int(f[0], r.line_no, 1);
      m.pickup = {parse_double(f[1], r.line_no, 2),
                  parse_double(f[2], r.line_no, 3)};
      m.delivery = {parse_double(f[3], r.line_no, 4),
                    parse_double(f[4], r.line_no, 5)};
      if (f[5] == "0") {
        m.rotary_only = false;
      } else if (f[5] == "1") {
        m.rotary_only = true;
      } else {
        throw ParseError(r.line_no, 6, "rotary_only must be 0 or 1");
      }
      inst.missions.push_back(m);
    }
  }
  {
    CsvReader r(fleet_csv);
    if (!r.next_row(f)) throw ParseError(1, 1, "missing header in " + fleet_csv);
    while (r.next_row(f)) {
      expect_fields(f, 2, r.line_no);
      Vehicle v;
      v.id = parse_int(f[0], r.line_no, 1);
      if (f[1] == "rotary") {
        v.kind = VehicleKind::RotaryWing;
      } else if (f[1] == "fixed") {
        v.kind = VehicleKind::FixedWing;
      } else {
        throw ParseError(r.line_no, 2, "unknown vehicle kind '" + f[1] + "'");
      }
      inst.fleet.push_back(v);
    }
  }

  validate_instance(inst);
  return inst;
}

void save_instance(const Instance& inst, const std::string& bases_csv,
                   const std::string& missions_csv,
                   const std::string& fleet_csv) {
  {
    std::ofstream out(bases_csv);
    if (!out) throw Error("cannot write " + bases_csv);
    out << "id,kind,lat,lon\n";
    for (const Base& b : inst.bases) {
      out << b.id << ','
          << (b.kind == BaseKind::Aerodrome ? "aerodrome" : "helipad") << ','
          << fmt_double(b.location.lat_deg) << ','
          << fmt_double(b.location.lon_deg) << '\n';
    }
  }
  {
    std::ofstream out(missions_csv);
    if (!out) throw Error("cannot write " + missions_csv);
    out << "id,pickup_lat,pickup_lon,delivery_lat,delivery_lon,rotary_only\n";
    for (const Mission& m : inst.missions) {
      out << m.id << ',' << fmt_double(m.pickup.lat_deg) << ','
          << fmt_double(m.pickup.lon_deg) << ','
          << fmt_double(m.delivery.lat_deg) << ','
          << fmt_double(m.delivery.lon_deg) << ',' << (m.rotary_only ? 1 : 0)
          << '\n';
    }
  }
  {
    std::ofstream out(fleet_csv);
    if (!out) throw Error("cannot write " + fleet_csv);
    out << "id,kind\n";
    for (const Vehicle& v : inst.fleet) {
      out << v.id << ','
          << (v.kind == VehicleKind::RotaryWing ? "rotary" : "fixed") << '\n';
    }
  }
}

nlohmann::json instance_to_json(const Instance& inst) {
  nlohmann::json j;
  j["bases"] = nlohmann::json::array();
  for (const Base& b : inst.bases) {
    j["bases"].push_back(
        {{"id", b.id},
         {"kind", b.kind == BaseKind::Aerodrome ? "aerodrome" : "helipad"},
         {"lat", b.location.lat_deg},
         {"lon", b.location.lon_deg}});
  }
  j["fleet"] = nlohmann::json::array();
  for (const Vehicle& v : inst.fleet) {
    j["fleet"].push_back(
        {{"id", v.id},
         {"kind", v.kind == VehicleKind::RotaryWing ? "rotary" : "fixed"}});
  }
  j["missions"] = nlohmann::json::array();
  for (const Mission& m : inst.missions) {
    j["missions"].push_back({{"id", m.id},
                             {"pickup_lat", m.pickup.lat_deg},
                             {"pickup_lon", m.pickup.lon_deg},
                             {"delivery_lat", m.delivery.lat_deg},
                             {"delivery_lon", m.delivery.lon_deg},
                             {"rotary_only", m.rotary_only}});
  }
  return j;
}

Instance instance_from_json(const nlohmann::json& j) {
  Instance inst;
  for (const auto& b : j.at("bases")) {
    inst.bases.push_back({b.at("id").get<int>(),
                          b.at("kind").get<std::string>() == "aerodrome"
                              ? BaseKind::Aerodrome
                              : BaseKind::Helipad,
                          {b.at("lat").get<double>(), b.at("lon").get<double>()}});
  }
  for (const auto& v : j.at("fleet")) {
    inst.fleet.push_back({v.at("id").get<int>(),
                          v.at("kind").get<std::string>() == "rotary"
                              ? VehicleKind::RotaryWing
                              : VehicleKind::FixedWing});
  }
  for (const auto& m : j.at("missions")) {
    inst.missions.push_back(
        {m.at("id").get<int>(),
         {m.at("pickup_lat").get<double>(), m.at("pickup_lon").get<double>()},
         {m.at("delivery_lat").get<double>(), m.at("delivery_lon").get<double>()},
         m.at("rotary_only").get<bool>()});
  }
  validate_instance(inst);
  return inst;
}

nlohmann::json assignment_to_json(const Assignment& a) {
  nlohmann::json j;
  j["placement"] = nlohmann::json::array();
  for (const auto& [vid, bid] : a.placement)
    j["placement"].push_back({{"vehicle", vid}, {"base", bid}});
  j["service"] = nlohmann::json::array();
  for (const auto& [mid, vid] : a.service)
    j["service"].push_back({{"mission", mid}, {"vehicle", vid}});
  return j;
}

Assignment assignment_from_json(const nlohmann::json& j) {
  Assignment a;
  for (const auto& p : j.at("placement"))
    a.placement[p.at("vehicle").get<int>()] = p.at("base").get<int>();
  for (const auto& s : j.at("service"))
    a.service[s.at("mission").get<int>()] = s.at("vehicle").get<int>();
  return a;
}

}  // namespace fleetplace
