#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fleetplace/model.hpp"

namespace fleetplace {

struct RankedStart {
  Assignment assignment;
  std::vector<int> unused_bases;  // base ids, ranking order
  Eigen::VectorXd base_totals;    // km, aligned with Instance::bases
};

// Fixed-order column sums: column b is accumulated rows 0..n-1. The
// sequential ranking and the parallel workers both call this, which is what
// makes their totals bit-identical.
void column_totals_range(const Eigen::MatrixXd& cost, Eigen::Index col_begin,
                         Eigen::Index col_end, Eigen::VectorXd& out);
Eigen::VectorXd column_totals(const Eigen::MatrixXd& cost);

// Deterministic starting point: rank bases by total cost over all missions,
// put the fleet on the best |fleet| bases (never choosing more helipads
// than there are rotary wings; helipads are filled with rotary vehicles
// first so every fixed wing finds an aerodrome), then give each mission the
// cheapest occupied base with a compatible vehicle. Ties fall to the lower
// base id. Throws NoCompatibleVehicleError if a rotary-only mission exists
// and no rotary vehicle was placed.
RankedStart rank_bases(const Instance& inst, const DistanceTable& t);

}  // namespace fleetplace
