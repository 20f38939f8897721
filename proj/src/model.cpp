#include "fleetplace/model.hpp"

#include <algorithm>
#include <set>

#include "fleetplace/errors.hpp"

namespace fleetplace {

namespace {

template <typename T>
int index_of(const std::vector<T>& items, int id) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

int Instance::base_index(int id) const { return index_of(bases, id); }
int Instance::vehicle_index(int id) const { return index_of(fleet, id); }
int Instance::mission_index(int id) const { return index_of(missions, id); }

int Instance::rotary_count() const {
  return static_cast<int>(std::count_if(fleet.begin(), fleet.end(), [](const Vehicle& v) {
    return v.kind == VehicleKind::RotaryWing;
  }));
}

int Instance::fixed_count() const {
  return static_cast<int>(fleet.size()) - rotary_count();
}

int Instance::aerodrome_count() const {
  return static_cast<int>(std::count_if(bases.begin(), bases.end(), [](const Base& b) {
    return b.kind == BaseKind::Aerodrome;
  }));
}

int Instance::helipad_count() const {
  return static_cast<int>(bases.size()) - aerodrome_count();
}

void validate_instance(const Instance& inst) {
  if (inst.fleet.empty()) throw ValidationError("fleet", "must not be empty");
  if (inst.bases.empty()) throw ValidationError("bases", "must not be empty");

  std::set<int> seen;
  for (const Base& b : inst.bases) {
    if (!seen.insert(b.id).second)
      throw ValidationError("base " + std::to_string(b.id), "duplicate id");
    if (!valid(b.location))
      throw ValidationError("base " + std::to_string(b.id),
                            "coordinates out of range");
  }
  seen.clear();
  for (const Vehicle& v : inst.fleet) {
    if (!seen.insert(v.id).second)
      throw ValidationError("vehicle " + std::to_string(v.id), "duplicate id");
  }
  seen.clear();
  for (const Mission& m : inst.missions) {
    if (!seen.insert(m.id).second)
      throw ValidationError("mission " + std::to_string(m.id), "duplicate id");
    if (!valid(m.pickup) || !valid(m.delivery))
      throw ValidationError("mission " + std::to_string(m.id),
                            "coordinates out of range");
  }
  if (inst.aerodrome_count() < inst.fixed_count())
    throw ValidationError("fleet",
                          "needs at least one aerodrome per fixed-wing vehicle");
}

DistanceTable build_distance_table(const Instance& inst, double radius_km) {
  DistanceTable t;
  t.earth_radius_km = radius_km;
  const auto n_missions = static_cast<Eigen::Index>(inst.missions.size());
  const auto n_bases = static_cast<Eigen::Index>(inst.bases.size());
  t.cost.resize(n_missions, n_bases);
  for (Eigen::Index b = 0; b < n_bases; ++b) {
    const GeoPoint& loc = inst.bases[static_cast<std::size_t>(b)].location;
    for (Eigen::Index m = 0; m < n_missions; ++m) {
      t.cost(m, b) = mission_cost_km(
          loc, inst.missions[static_cast<std::size_t>(m)], radius_km);
    }
  }
  return t;
}

bool compatible_vehicle_base(const Vehicle& v, const Base& b) {
  return !(v.kind == VehicleKind::FixedWing && b.kind == BaseKind::Helipad);
}

bool compatible_vehicle_mission(const Vehicle& v, const Mission& m) {
  return !(m.rotary_only && v.kind == VehicleKind::FixedWing);
}

std::string to_string(Rule r) {
  switch (r) {
    case Rule::OneVehiclePerMission: return "OneVehiclePerMission";
    case Rule::OneBasePerVehicle: return "OneBasePerVehicle";
    case Rule::BaseOccupancy: return "BaseOccupancy";
    case Rule::ServiceRequiresPlacement: return "ServiceRequiresPlacement";
    case Rule::RotaryOnly: return "RotaryOnly";
    case Rule::FixedWingOnHelipad: return "FixedWingOnHelipad";
  }
  return "?";
}

std::string to_string(const Violation& v) {
  std::string s = to_string(v.rule) + "(" + std::to_string(v.subject_id);
  if (v.related_id >= 0) s += ", " + std::to_string(v.related_id);
  return s + ")";
}

std::vector<Violation> check_feasible(const Assignment& a,
                                      const Instance& inst) {
  std::vector<Violation> out;
  std::set<std::pair<Rule, int>> reported;
  auto report = [&](Rule r, int subject, int related = -1) {
    if (reported.insert({r, subject}).second)
      out.push_back(Violation{r, subject, related});
  };

  // Placement side: every vehicle on exactly one base, bases
  // single-occupancy, fixed wings never on helipads.
  std::map<int, int> base_load;  // base id -> vehicles placed there
  for (const auto& [vid, bid] : a.placement) {
    const int vi = inst.vehicle_index(vid);
    const int bi = inst.base_index(bid);
    if (vi < 0 || bi < 0) {
      report(Rule::OneBasePerVehicle, vid, bid);
      continue;
    }
    base_load[bid] += 1;
    if (!compatible_vehicle_base(inst.fleet[static_cast<std::size_t>(vi)],
                                 inst.bases[static_cast<std::size_t>(bi)]))
      report(Rule::FixedWingOnHelipad, vid, bid);
  }
  for (const auto& [bid, load] : base_load) {
    if (load > 1) report(Rule::BaseOccupancy, bid);
  }
  for (const Vehicle& v : inst.fleet) {
    if (!a.placement.contains(v.id)) report(Rule::OneBasePerVehicle, v.id);
  }

  // Service side: every mission served, serving vehicle placed,
  // rotary-only missions on rotary wings.
  for (const auto& [mid, vid] : a.service) {
    const int mi = inst.mission_index(mid);
    const int vi = inst.vehicle_index(vid);
    if (mi < 0) {
      report(Rule::OneVehiclePerMission, mid, vid);
      continue;
    }
    if (vi < 0) {
      report(Rule::ServiceRequiresPlacement, vid, mid);
      continue;
    }
    if (!a.placement.contains(vid))
      report(Rule::ServiceRequiresPlacement, vid, mid);
    if (!compatible_vehicle_mission(
            inst.fleet[static_cast<std::size_t>(vi)],
            inst.missions[static_cast<std::size_t>(mi)]))
      report(Rule::RotaryOnly, mid, vid);
  }
  for (const Mission& m : inst.missions) {
    if (!a.service.contains(m.id)) report(Rule::OneVehiclePerMission, m.id);
  }

  return out;
}

double objective_km(const Assignment& a, const Instance& inst,
                    const DistanceTable& t) {
  const auto violations = check_feasible(a, inst);
  if (!violations.empty())
    throw InfeasibleError("infeasible assignment: " +
                          to_string(violations.front()));

  // Fixed mission-order summation; incremental search totals reproduce it
  // bit for bit.
  double total = 0.0;
  for (std::size_t mi = 0; mi < inst.missions.size(); ++mi) {
    const int vid = a.service.at(inst.missions[mi].id);
    const int bi = inst.base_index(a.placement.at(vid));
    total += t.cost(static_cast<Eigen::Index>(mi), bi);
  }
  return total;
}

}  // namespace fleetplace
