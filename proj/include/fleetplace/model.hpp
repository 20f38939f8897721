#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "fleetplace/geo.hpp"

namespace fleetplace {

enum class VehicleKind { RotaryWing, FixedWing };
enum class BaseKind { Aerodrome, Helipad };

struct Vehicle {
  int id = 0;
  VehicleKind kind = VehicleKind::RotaryWing;
};

struct Base {
  int id = 0;
  BaseKind kind = BaseKind::Aerodrome;
  GeoPoint location;
};

struct Mission {
  int id = 0;
  GeoPoint pickup;
  GeoPoint delivery;
  bool rotary_only = false;
};

inline double mission_cost_km(const GeoPoint& base, const Mission& m,
                              double radius_km = kEarthRadiusKm) {
  return mission_cost_km(base, m.pickup, m.delivery, radius_km);
}

// The whole problem. Entity order is load order; it fixes distance-table
// rows/columns, permutation indexing, and brute-force enumeration, so every
// deterministic contract downstream depends on it.
struct Instance {
  std::vector<Base> bases;
  std::vector<Vehicle> fleet;
  std::vector<Mission> missions;

  int base_index(int id) const;  // -1 when the id is unknown
  int vehicle_index(int id) const;
  int mission_index(int id) const;

  int rotary_count() const;
  int fixed_count() const;
  int aerodrome_count() const;
  int helipad_count() const;
};

// Throws ValidationError on duplicate ids, out-of-range coordinates, an
// empty fleet, or fewer aerodromes than fixed-wing vehicles.
void validate_instance(const Instance& inst);

// cost(m, b) = mission_cost_km(bases[b].location, missions[m]). Aerodrome
// and helipad columns share the one matrix; vehicle/base compatibility
// decides who may be charged from which column.
struct DistanceTable {
  Eigen::MatrixXd cost;  // missions x bases
  double earth_radius_km = kEarthRadiusKm;
};

DistanceTable build_distance_table(const Instance& inst,
                                   double radius_km = kEarthRadiusKm);

// placement: vehicle id -> base id, present only for placed vehicles.
// service: mission id -> serving vehicle id.
// Ordered maps keep iteration deterministic everywhere.
struct Assignment {
  std::map<int, int> placement;
  std::map<int, int> service;

  bool operator==(const Assignment&) const = default;
};

// false iff v is fixed-wing and b is a helipad.
bool compatible_vehicle_base(const Vehicle& v, const Base& b);

// false iff m is rotary-only and v is fixed-wing.
bool compatible_vehicle_mission(const Vehicle& v, const Mission& m);

enum class Rule {
  OneVehiclePerMission,
  OneBasePerVehicle,
  BaseOccupancy,
  ServiceRequiresPlacement,
  RotaryOnly,
  FixedWingOnHelipad,
};

struct Violation {
  Rule rule;
  int subject_id;       // the entity breaking the rule
  int related_id = -1;  // counterpart when one exists

  bool operator==(const Violation&) const = default;
};

std::string to_string(Rule r);
std::string to_string(const Violation& v);

// Empty iff the assignment satisfies every placement constraint: each
// mission served by exactly one vehicle, each vehicle on exactly one base,
// at most one vehicle per base, serviced vehicles placed, rotary-only
// missions on rotary wings, fixed wings never on helipads. Infeasibility is
// data, not failure.
std::vector<Violation> check_feasible(const Assignment& a,
                                      const Instance& inst);

// Total serviced distance: each mission charges the cost of its serving
// vehicle's base. Throws InfeasibleError naming the first violation when
// the assignment does not pass check_feasible.
double objective_km(const Assignment& a, const Instance& inst,
                    const DistanceTable& t);

}  // namespace fleetplace
