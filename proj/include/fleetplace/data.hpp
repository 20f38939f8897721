#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "fleetplace/model.hpp"

namespace fleetplace {

// Candidate coordinates instances are drawn from. Stands in for a real
// facility census: aerodromes and helipads become bases, health sites
// become mission pickup/delivery points.
struct FacilityPool {
  std::vector<GeoPoint> aerodromes;
  std::vector<GeoPoint> helipads;
  std::vector<GeoPoint> health_sites;
};

struct BoundingBox {
  double lat_min = 42.0;
  double lat_max = 57.0;
  double lon_min = -96.0;
  double lon_max = -74.0;
};

struct PoolCounts {
  int aerodromes = 274;
  int helipads = 104;
  int health_sites = 200;
};

// Clustered generation: a few dense urban clusters plus sparse remote
// scatter. Uniform scatter would overweight empty territory. Helipads are
// hospital pads: by default every one sits on a sampled health site.
struct PoolShape {
  int clusters = 5;
  double cluster_stddev_deg = 0.35;
  double urban_fraction = 0.7;
  double helipad_site_fraction = 1.0;
};

FacilityPool synthesize_pool(std::uint64_t seed, const BoundingBox& box,
                             const PoolCounts& counts,
                             const PoolShape& shape = {});

// Missions sample pickup and delivery from health sites (always distinct
// sites); all pool bases become instance bases; fleet defaults to the
// 8 rotary + 4 fixed census. Byte-identical output per seed.
Instance generate_instance(const FacilityPool& pool, int n_missions,
                           double rotary_only_fraction, std::uint64_t seed,
                           int rotary_vehicles = 8, int fixed_vehicles = 4);

// Three-file CSV schema, one header row each, '.' decimal separator:
//   bases.csv    id,kind,lat,lon            kind: aerodrome | helipad
//   missions.csv id,pickup_lat,pickup_lon,delivery_lat,delivery_lon,rotary_only
//   fleet.csv    id,kind                    kind: rotary | fixed
Instance load_instance(const std::string& bases_csv,
                       const std::string& missions_csv,
                       const std::string& fleet_csv);

void save_instance(const Instance& inst, const std::string& bases_csv,
                   const std::string& missions_csv,
                   const std::string& fleet_csv);

nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

nlohmann::json assignment_to_json(const Assignment& a);
Assignment assignment_from_json(const nlohmann::json& j);

}  // namespace fleetplace
