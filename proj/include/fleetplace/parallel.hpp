#pragma once

#include <Eigen/Dense>

#include "fleetplace/search.hpp"

namespace fleetplace {

// Worker count for the data-parallel paths. The commit protocol is fixed:
// mutations are serialized in permutation order, so results stay
// reproducible. workers = 1 degenerates to the sequential code.
struct ParallelConfig {
  int workers = 1;
};

// Bit-identical to the totals rank_bases computes: every column is summed
// in fixed row order, workers just split the columns.
Eigen::VectorXd parallel_rank_totals(const DistanceTable& t,
                                     const ParallelConfig& pcfg);

// Returns exactly the sequential local_search result for the same seed.
// Workers speculatively evaluate outer-index rows against a read snapshot;
// rows are consumed strictly in permutation order, and any row that could
// apply a move (or whose snapshot went stale) is re-run against the current
// state before its changes commit.
Assignment parallel_local_search(const RankedStart& start, const Instance& inst,
                                 const DistanceTable& t, const SearchConfig& cfg,
                                 const ParallelConfig& pcfg,
                                 SearchStats* stats = nullptr);

// Free-running tabu workers sharing one state and one tabu list. Commits
// re-validate against the current state under an exclusive lock; tabu
// check/insert/tick are serialized. Results are feasible and typically
// close to the sequential search, but not equal to it: concurrent workers
// tick the tenure clock and insert keys at different points.
Assignment parallel_tabu_search(const RankedStart& start, const Instance& inst,
                                const DistanceTable& t, const SearchConfig& cfg,
                                const ParallelConfig& pcfg,
                                SearchStats* stats = nullptr);

}  // namespace fleetplace
