#pragma once

// Index-based search engine behind local_search, tabu_search, and the
// parallel variants. Everything here works on instance indices, not ids;
// the public API converts at the boundary.

#include <optional>
#include <vector>

#include "fleetplace/model.hpp"
#include "fleetplace/search.hpp"

namespace fleetplace::detail {

struct IndexPoolEntry {
  PoolEntryKind kind;
  int index;  // base index or vehicle index
};

struct SearchState {
  const Instance* inst = nullptr;
  const DistanceTable* table = nullptr;

  std::vector<int> vehicle_base;      // vehicle index -> base index
  std::vector<int> mission_vehicle;   // mission index -> vehicle index
  std::vector<int> base_vehicle;      // base index -> vehicle index or -1
  std::vector<int> vehicle_missions;  // vehicle index -> mission count
  std::vector<IndexPoolEntry> pool;
  std::vector<double> mission_cost;   // current cost charged per mission
  double total = 0.0;                 // always the fixed-order sum of mission_cost

  static SearchState from(const Assignment& a, const UnusedPool& pool,
                          const Instance& inst, const DistanceTable& t);
  Assignment to_assignment() const;

  double resum() const {
    double s = 0.0;
    for (const double c : mission_cost) s += c;
    return s;
  }

  int mission_count() const { return static_cast<int>(mission_cost.size()); }
};

struct MoveCandidate {
  MoveKind kind;
  int mission;             // mission index receiving the change (j)
  int gain_vehicle = -1;   // takeover/reassign: vehicle gaining the mission;
                           // relocate: the vehicle that moves
  int target_base = -1;    // relocate only: destination base index
  int pool_pos = -1;       // takeover/relocate: pool position consumed
  int j_side_vehicle = -1; // vehicle selected through j (loser or mover)
  double quick_delta = 0.0;
};

// Candidate builders return nullopt when the move's preconditions fail.
// i is the raw outer index value: a pool position for takeover/relocate,
// a mission index for reassign.
std::optional<MoveCandidate> eval_takeover(const SearchState& st, int i, int j);
std::optional<MoveCandidate> eval_relocate(const SearchState& st, int i, int j);
std::optional<MoveCandidate> eval_reassign(const SearchState& st, int i, int j);

// Objective after the candidate, summed in the same fixed mission order the
// state total uses. Does not mutate.
double candidate_total(const SearchState& st, const MoveCandidate& c);

// Mutates the state, keeps the pool deterministic (entries swap in place
// where one leaves as another enters), and re-derives total so it stays the
// exact fixed-order sum.
void apply_move(SearchState& st, const MoveCandidate& c);

// Tabu keys that would block the pair (i, j) right now, in check order.
void candidate_tabu_keys(const SearchState& st, int i, int j,
                         std::vector<TabuKey>& out);

// Keys recorded when a candidate is applied: the entity picked through the
// outer index and the vehicle picked through the inner one.
TabuKey outer_key(const SearchState& st, const MoveCandidate& c);
TabuKey inner_key(const SearchState& st, const MoveCandidate& c);

// One outer-index row of the first-improvement loop: walks perm_b, applies
// improving moves in place. With a tabu list present, blocked pairs skip
// forward (returning early when the block was outer-selected). Returns true
// if any move was applied.
bool run_row(SearchState& st, int i_val, const std::vector<int>& perm_b,
             TabuList* tabu, bool debug_check_deltas, SearchStats* stats);

// Read-only answer to "would run_row apply at least one move from this
// state?"; used for speculative evaluation. Exact for tabu-free rows.
bool row_has_improvement(const SearchState& st, int i_val,
                         const std::vector<int>& perm_b);

void debug_verify_total(const SearchState& st);

}  // namespace fleetplace::detail
