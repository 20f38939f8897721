#include "fleetplace/exact.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "fleetplace/errors.hpp"

namespace fleetplace {

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

struct Enumerator {
  const Instance& inst;
  const DistanceTable table;
  std::vector<int> vehicles_by_id;  // vehicle indices sorted by id
  std::vector<int> bases_by_id;     // base indices sorted by id

  std::vector<int> placement;       // slot -> base index, parallel to vehicles_by_id
  std::vector<bool> base_used;
  std::uint64_t leaves = 0;

  bool found = false;
  double best_objective = 0.0;
  std::vector<int> best_placement;
  std::vector<int> best_service;    // mission index -> vehicle index

  explicit Enumerator(const Instance& i)
      : inst(i), table(build_distance_table(i)) {
    auto sorted_indices = [](const auto& items) {
      std::vector<int> idx(items.size());
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        return items[static_cast<std::size_t>(a)].id <
               items[static_cast<std::size_t>(b)].id;
      });
      return idx;
    };
    vehicles_by_id = sorted_indices(inst.fleet);
    bases_by_id = sorted_indices(inst.bases);
    placement.assign(vehicles_by_id.size(), -1);
    base_used.assign(inst.bases.size(), false);
  }

  // With the placement fixed, missions decouple: each takes its cheapest
  // compatible placed vehicle, lowest vehicle id on ties. The total is
  // accumulated in instance mission order, the same order objective_km
  // uses, so the two agree exactly.
  void evaluate_leaf() {
    ++leaves;
    double total = 0.0;
    std::vector<int> service(inst.missions.size(), -1);
    for (std::size_t mi = 0; mi < inst.missions.size(); ++mi) {
      const Mission& m = inst.missions[mi];
      int chosen = -1;
      double chosen_cost = 0.0;
      for (std::size_t slot = 0; slot < vehicles_by_id.size(); ++slot) {
        const int vi = vehicles_by_id[slot];
        if (!compatible_vehicle_mission(inst.fleet[static_cast<std::size_t>(vi)], m))
          continue;
        const double c = table.cost(static_cast<Eigen::Index>(mi), placement[slot]);
        if (chosen < 0 || c < chosen_cost) {
          chosen = vi;
          chosen_cost = c;
        }
      }
      if (chosen < 0) return;  // rotary-only mission, no rotary in fleet
      service[mi] = chosen;
      total += chosen_cost;
    }
    if (!found || total < best_objective) {
      found = true;
      best_objective = total;
      best_placement = placement;
      best_service = service;
    }
  }

  void enumerate(std::size_t slot) {
    if (slot == vehicles_by_id.size()) {
      evaluate_leaf();
      return;
    }
    const Vehicle& v =
        inst.fleet[static_cast<std::size_t>(vehicles_by_id[slot])];
    for (int bi : bases_by_id) {
      if (base_used[static_cast<std::size_t>(bi)]) continue;
      if (!compatible_vehicle_base(v, inst.bases[static_cast<std::size_t>(bi)]))
        continue;
      base_used[static_cast<std::size_t>(bi)] = true;
      placement[slot] = bi;
      enumerate(slot + 1);
      base_used[static_cast<std::size_t>(bi)] = false;
    }
  }
};

}  // namespace

ExactResult brute_force_optimal(const Instance& inst, std::uint64_t limit) {
  validate_instance(inst);

  // Guard: product of per-vehicle placement choices and per-mission service
  // choices, saturating.
  std::uint64_t bound = 1;
  for (const Vehicle& v : inst.fleet) {
    std::uint64_t options = 0;
    for (const Base& b : inst.bases)
      if (compatible_vehicle_base(v, b)) ++options;
    bound = saturating_mul(bound, std::max<std::uint64_t>(options, 1));
  }
  for (const Mission& m : inst.missions) {
    std::uint64_t options = 0;
    for (const Vehicle& v : inst.fleet)
      if (compatible_vehicle_mission(v, m)) ++options;
    bound = saturating_mul(bound, std::max<std::uint64_t>(options, 1));
  }
  if (bound > limit)
    throw BudgetExceededError("enumeration bound " + std::to_string(bound) +
                              " exceeds limit " + std::to_string(limit));

  Enumerator e(inst);
  e.enumerate(0);
  if (!e.found)
    throw InfeasibleError("no feasible assignment exists for this instance");

  ExactResult result;
  result.nodes_enumerated = e.leaves;
  for (std::size_t slot = 0; slot < e.vehicles_by_id.size(); ++slot) {
    const int vi = e.vehicles_by_id[slot];
    result.assignment.placement[inst.fleet[static_cast<std::size_t>(vi)].id] =
        inst.bases[static_cast<std::size_t>(e.best_placement[slot])].id;
  }
  for (std::size_t mi = 0; mi < inst.missions.size(); ++mi) {
    result.assignment.service[inst.missions[mi].id] =
        inst.fleet[static_cast<std::size_t>(e.best_service[mi])].id;
  }
  result.objective_km = objective_km(result.assignment, inst, e.table);
  return result;
}

double objective_lower_bound_km(const Instance& inst, const DistanceTable& t) {
  double total = 0.0;
  for (std::size_t mi = 0; mi < inst.missions.size(); ++mi) {
    const Mission& m = inst.missions[mi];
    double best = std::numeric_limits<double>::infinity();
    for (const Vehicle& v : inst.fleet) {
      if (!compatible_vehicle_mission(v, m)) continue;
      for (std::size_t bi = 0; bi < inst.bases.size(); ++bi) {
        if (!compatible_vehicle_base(v, inst.bases[bi])) continue;
        best = std::min(best, t.cost(static_cast<Eigen::Index>(mi),
                                     static_cast<Eigen::Index>(bi)));
      }
    }
    if (best == std::numeric_limits<double>::infinity())
      throw InfeasibleError("mission " + std::to_string(m.id) +
                            " has no compatible vehicle");
    total += best;
  }
  return total;
}

}  // namespace fleetplace
