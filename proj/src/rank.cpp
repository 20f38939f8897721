#include "fleetplace/rank.hpp"

#include <algorithm>
#include <numeric>

#include "fleetplace/errors.hpp"

namespace fleetplace {

void column_totals_range(const Eigen::MatrixXd& cost, Eigen::Index col_begin,
                         Eigen::Index col_end, Eigen::VectorXd& out) {
  for (Eigen::Index b = col_begin; b < col_end; ++b) {
    double sum = 0.0;
    for (Eigen::Index m = 0; m < cost.rows(); ++m) sum += cost(m, b);
    out(b) = sum;
  }
}

Eigen::VectorXd column_totals(const Eigen::MatrixXd& cost) {
  Eigen::VectorXd totals(cost.cols());
  column_totals_range(cost, 0, cost.cols(), totals);
  return totals;
}

RankedStart rank_bases(const Instance& inst, const DistanceTable& t) {
  validate_instance(inst);
  const int n_bases = static_cast<int>(inst.bases.size());
  const int fleet_size = static_cast<int>(inst.fleet.size());
  const int rotary = inst.rotary_count();

  RankedStart start;
  start.base_totals = column_totals(t.cost);

  // Ascending by total, lower id on ties.
  std::vector<int> order(static_cast<std::size_t>(n_bases));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ta = start.base_totals(a);
    const double tb = start.base_totals(b);
    if (ta != tb) return ta < tb;
    return inst.bases[static_cast<std::size_t>(a)].id <
           inst.bases[static_cast<std::size_t>(b)].id;
  });

  // Top |fleet| bases, skipping helipads once the rotary fleet could no
  // longer absorb another one.
  std::vector<int> chosen;  // base indices, ranking order
  int chosen_helipads = 0;
  for (int bi : order) {
    if (static_cast<int>(chosen.size()) == fleet_size) break;
    const bool helipad =
        inst.bases[static_cast<std::size_t>(bi)].kind == BaseKind::Helipad;
    if (helipad && chosen_helipads == rotary) continue;
    chosen.push_back(bi);
    if (helipad) ++chosen_helipads;
  }
  if (static_cast<int>(chosen.size()) < fleet_size)
    throw ValidationError("bases",
                          "not enough compatible bases to place the fleet");

  // Helipads first so every fixed wing still finds an aerodrome. Vehicles
  // fill in id order within each kind.
  std::vector<int> rotary_ids, fixed_ids;
  for (const Vehicle& v : inst.fleet)
    (v.kind == VehicleKind::RotaryWing ? rotary_ids : fixed_ids).push_back(v.id);
  std::sort(rotary_ids.begin(), rotary_ids.end());
  std::sort(fixed_ids.begin(), fixed_ids.end());

  std::vector<int> helipad_choices, aerodrome_choices;  // ranking order
  for (int bi : chosen)
    (inst.bases[static_cast<std::size_t>(bi)].kind == BaseKind::Helipad
         ? helipad_choices
         : aerodrome_choices)
        .push_back(bi);

  std::vector<int> base_vehicle(static_cast<std::size_t>(n_bases), -1);
  std::size_t next_rotary = 0;
  for (int bi : helipad_choices) {
    const int vid = rotary_ids[next_rotary++];
    start.assignment.placement[vid] = inst.bases[static_cast<std::size_t>(bi)].id;
    base_vehicle[static_cast<std::size_t>(bi)] = inst.vehicle_index(vid);
  }
  std::size_t next_fixed = 0;
  for (int bi : aerodrome_choices) {
    const int vid = next_rotary < rotary_ids.size()
                        ? rotary_ids[next_rotary++]
                        : fixed_ids[next_fixed++];
    start.assignment.placement[vid] = inst.bases[static_cast<std::size_t>(bi)].id;
    base_vehicle[static_cast<std::size_t>(bi)] = inst.vehicle_index(vid);
  }

  // Each mission takes the cheapest occupied base whose vehicle may fly it.
  for (std::size_t mi = 0; mi < inst.missions.size(); ++mi) {
    const Mission& m = inst.missions[mi];
    int best_base = -1;
    double best_cost = 0.0;
    for (int bi : chosen) {
      const int vi = base_vehicle[static_cast<std::size_t>(bi)];
      if (!compatible_vehicle_mission(inst.fleet[static_cast<std::size_t>(vi)], m))
        continue;
      const double c = t.cost(static_cast<Eigen::Index>(mi), bi);
      const bool better =
          best_base < 0 || c < best_cost ||
          (c == best_cost && inst.bases[static_cast<std::size_t>(bi)].id <
                                 inst.bases[static_cast<std::size_t>(best_base)].id);
      if (better) {
        best_base = bi;
        best_cost = c;
      }
    }
    if (best_base < 0)
      throw NoCompatibleVehicleError("mission " + std::to_string(m.id) +
                                     " has no compatible placed vehicle");
    const int vi = base_vehicle[static_cast<std::size_t>(best_base)];
    start.assignment.service[m.id] = inst.fleet[static_cast<std::size_t>(vi)].id;
  }

  for (int bi : order) {
    if (base_vehicle[static_cast<std::size_t>(bi)] < 0)
      start.unused_bases.push_back(inst.bases[static_cast<std::size_t>(bi)].id);
  }

  return start;
}

}  // namespace fleetplace
