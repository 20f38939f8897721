#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "fleetplace/model.hpp"

namespace fleetplace {

struct ExactResult {
  Assignment assignment;
  double objective_km = 0.0;
  std::uint64_t nodes_enumerated = 0;  // complete placements evaluated
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

// Globally minimal feasible assignment by exhaustive enumeration.
//
// Placements are enumerated vehicles-in-id-order x bases-in-id-order; with a
// placement fixed, mission choices decouple, so each mission greedily takes
// the cheapest compatible placed vehicle (lowest vehicle id on ties). Ties
// across placements keep the first one enumerated, which makes the result
// the lexicographically smallest optimal (placement, service) encoding.
//
// Throws BudgetExceededError when the product of placement and service
// choices exceeds `limit`, InfeasibleError when no assignment satisfies the
// constraints.
ExactResult brute_force_optimal(const Instance& inst,
                                std::uint64_t limit = kDefaultEnumerationBudget);

// Sum over missions of the cheapest cost any compatible vehicle could ever
// charge, ignoring base occupancy. A valid lower bound on every feasible
// assignment; useful as a reference when exact enumeration is out of reach.
double objective_lower_bound_km(const Instance& inst, const DistanceTable& t);

enum class MilpFormat { Lp, Mps };

// Complete binary program equivalent to the placement problem, as LP or MPS
// text. Variables follow the fixed scheme
//   v_<rotary>_<mission>   rotary serves mission
//   w_<fixed>_<mission>    fixed-wing serves mission
//   x_<fixed>_<aerodrome>  fixed-wing placed on aerodrome
//   y_<rotary>_<aerodrome> rotary placed on aerodrome
//   z_<rotary>_<helipad>   rotary placed on helipad
//   s_<vehicle>_<base>_<mission>  serve-and-placed product (linearization)
// so solution files can be imported unambiguously.
std::string export_milp(const Instance& inst, const DistanceTable& t,
                        MilpFormat format);

// Rebuilds an Assignment from a solver solution listing ("name value" per
// line, '#' comments allowed). Values must be binary within 1e-6. Throws
// UnknownVariableError, NonBinaryValueError, or
// InfeasibleReconstructionError.
Assignment import_solution(std::istream& text, const Instance& inst);
Assignment import_solution_file(const std::string& path, const Instance& inst);

}  // namespace fleetplace
