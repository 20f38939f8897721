#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "fleetplace/model.hpp"
#include "fleetplace/rank.hpp"

namespace fleetplace {

enum class SearchMode { Local, Tabu };

struct SearchConfig {
  std::uint64_t seed = 0;
  SearchMode mode = SearchMode::Local;
  // Inner-loop iterations a tabu key stays live. 0 = auto, resolved to
  // 2 x mission count when the search starts.
  int tabu_tenure = 0;
  std::optional<int> max_passes;
  // Recompute the objective from scratch after every applied move and fail
  // loudly if the incremental total drifts.
  bool debug_check_deltas = false;
};

enum class MoveKind {
  TakeoverByIdleVehicle,
  RelocateToEmptyBase,
  ReassignToPlacedVehicle,
};

// The shared pool of swap material: bases nobody occupies and placed
// vehicles currently serving no mission.
enum class PoolEntryKind { EmptyBase, IdleVehicle };

struct PoolEntry {
  PoolEntryKind kind;
  int id;  // base id or vehicle id

  bool operator==(const PoolEntry&) const = default;
};

using UnusedPool = std::vector<PoolEntry>;

// Pool at the start of a search: unplaced bases in ranking order, then any
// placed vehicle with no missions, in vehicle id order.
UnusedPool initial_pool(const RankedStart& start, const Instance& inst);

struct MoveProposal {
  MoveKind kind;
  // Outer index: position in the unused pool for takeover/relocation, the
  // mission index whose vehicle takes over for reassignment.
  int i_entity;
  int j_mission;    // mission id
  double delta_km;  // objective(after) - objective(before), exact
};

// The up-to-three neighbourhood moves reachable from (i, j), each carrying
// its exact objective delta. Options whose compatibility or occupancy
// preconditions fail are simply absent.
std::vector<MoveProposal> enumerate_moves(const Assignment& a,
                                          const UnusedPool& pool, int i,
                                          int j_mission, const Instance& inst,
                                          const DistanceTable& t);

struct SearchStats {
  std::uint64_t passes = 0;
  std::uint64_t evaluations = 0;
  std::uint64_t applied_moves = 0;
  std::uint64_t committed_moves = 0;
  std::uint64_t tabu_skips_outer = 0;
  std::uint64_t tabu_skips_inner = 0;
  double final_objective_km = 0.0;
};

// Which loop index selected the entity a tabu key records.
enum class TabuRole { OuterIndex, InnerIndex };

struct TabuKey {
  MoveKind kind;
  int entity_id;  // moved vehicle id or target base id

  auto operator<=>(const TabuKey&) const = default;
};

class TabuList {
 public:
  explicit TabuList(int tenure) : tenure_(tenure) {}

  std::optional<TabuRole> role_of(const TabuKey& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second.role;
  }

  // (Re)arms the key at full tenure.
  void insert(const TabuKey& key, TabuRole role) {
    entries_[key] = Entry{tenure_, role};
  }

  // One inner-loop tick: every counter drops by one, expired keys leave.
  void decrement_all() {
    for (auto it = entries_.begin(); it != entries_.end();) {
      if (--it->second.remaining <= 0)
        it = entries_.erase(it);
      else
        ++it;
    }
  }

  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    int remaining;
    TabuRole role;
  };
  int tenure_;
  std::map<TabuKey, Entry> entries_;
};

// First-improvement hill climber over the three move kinds. Outer index
// walks one seeded permutation of mission count, inner index a second; both
// are redrawn after every pass that applied a move, and the search stops at
// the first quiescent pass. cfg.mode must be Local.
Assignment local_search(const RankedStart& start, const Instance& inst,
                        const DistanceTable& t, const SearchConfig& cfg,
                        SearchStats* stats = nullptr);

// local_search plus tabu exclusion: keys for applied improving moves block
// their neighbourhood for tabu_tenure inner iterations, skipping forward
// over the outer or inner index depending on which one selected the blocked
// entity. Non-improving moves are never accepted. cfg.mode must be Tabu.
Assignment tabu_search(const RankedStart& start, const Instance& inst,
                       const DistanceTable& t, const SearchConfig& cfg,
                       SearchStats* stats = nullptr);

}  // namespace fleetplace
