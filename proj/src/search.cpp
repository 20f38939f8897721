#include "fleetplace/search.hpp"

#include <cmath>
#include <stdexcept>

#include "fleetplace/errors.hpp"
#include "fleetplace/rng.hpp"
#include "search_state.hpp"

namespace fleetplace {

namespace detail {

SearchState SearchState::from(const Assignment& a, const UnusedPool& pool,
                              const Instance& inst, const DistanceTable& t) {
  SearchState st;
  st.inst = &inst;
  st.table = &t;
  st.vehicle_base.assign(inst.fleet.size(), -1);
  st.mission_vehicle.assign(inst.missions.size(), -1);
  st.base_vehicle.assign(inst.bases.size(), -1);
  st.vehicle_missions.assign(inst.fleet.size(), 0);
  st.mission_cost.assign(inst.missions.size(), 0.0);

  for (const auto& [vid, bid] : a.placement) {
    const int vi = inst.vehicle_index(vid);
    const int bi = inst.base_index(bid);
    if (vi < 0 || bi < 0)
      throw InfeasibleError("assignment references unknown ids");
    st.vehicle_base[static_cast<std::size_t>(vi)] = bi;
    st.base_vehicle[static_cast<std::size_t>(bi)] = vi;
  }
  for (const auto& [mid, vid] : a.service) {
    const int mi = inst.mission_index(mid);
    const int vi = inst.vehicle_index(vid);
    if (mi < 0 || vi < 0 || st.vehicle_base[static_cast<std::size_t>(vi)] < 0)
      throw InfeasibleError("service references unplaced vehicle");
    st.mission_vehicle[static_cast<std::size_t>(mi)] = vi;
    ++st.vehicle_missions[static_cast<std::size_t>(vi)];
  }
  for (std::size_t mi = 0; mi < inst.missions.size(); ++mi) {
    const int vi = st.mission_vehicle[mi];
    if (vi < 0) throw InfeasibleError("search start must serve every mission");
    st.mission_cost[mi] =
        t.cost(static_cast<Eigen::Index>(mi),
               st.vehicle_base[static_cast<std::size_t>(vi)]);
  }
  st.total = st.resum();

  st.pool.reserve(pool.size());
  for (const PoolEntry& e : pool) {
    if (e.kind == PoolEntryKind::EmptyBase) {
      const int bi = inst.base_index(e.id);
      if (bi < 0 || st.base_vehicle[static_cast<std::size_t>(bi)] >= 0)
        throw InfeasibleError("pool lists an occupied or unknown base");
      st.pool.push_back({PoolEntryKind::EmptyBase, bi});
    } else {
      const int vi = inst.vehicle_index(e.id);
      if (vi < 0 || st.vehicle_missions[static_cast<std::size_t>(vi)] != 0)
        throw InfeasibleError("pool lists a busy or unknown vehicle");
      st.pool.push_back({PoolEntryKind::IdleVehicle, vi});
    }
  }
  return st;
}

Assignment SearchState::to_assignment() const {
  Assignment a;
  for (std::size_t vi = 0; vi < vehicle_base.size(); ++vi) {
    if (vehicle_base[vi] >= 0)
      a.placement[inst->fleet[vi].id] =
          inst->bases[static_cast<std::size_t>(vehicle_base[vi])].id;
  }
  for (std::size_t mi = 0; mi < mission_vehicle.size(); ++mi) {
    if (mission_vehicle[mi] >= 0)
      a.service[inst->missions[mi].id] =
          inst->fleet[static_cast<std::size_t>(mission_vehicle[mi])].id;
  }
  return a;
}

std::optional<MoveCandidate> eval_takeover(const SearchState& st, int i, int j) {
  if (i < 0 || i >= static_cast<int>(st.pool.size())) return std::nullopt;
  const IndexPoolEntry entry = st.pool[static_cast<std::size_t>(i)];
  if (entry.kind != PoolEntryKind::IdleVehicle) return std::nullopt;
  const int gain = entry.index;
  const Mission& m = st.inst->missions[static_cast<std::size_t>(j)];
  if (!compatible_vehicle_mission(st.inst->fleet[static_cast<std::size_t>(gain)], m))
    return std::nullopt;
  const int loser = st.mission_vehicle[static_cast<std::size_t>(j)];

  MoveCandidate c;
  c.kind = MoveKind::TakeoverByIdleVehicle;
  c.mission = j;
  c.gain_vehicle = gain;
  c.pool_pos = i;
  c.j_side_vehicle = loser;
  c.quick_delta = st.table->cost(j, st.vehicle_base[static_cast<std::size_t>(gain)]) -
                  st.mission_cost[static_cast<std::size_t>(j)];
  return c;
}

std::optional<MoveCandidate> eval_relocate(const SearchState& st, int i, int j) {
  if (i < 0 || i >= static_cast<int>(st.pool.size())) return std::nullopt;
  const IndexPoolEntry entry = st.pool[static_cast<std::size_t>(i)];
  if (entry.kind != PoolEntryKind::EmptyBase) return std::nullopt;
  const int target = entry.index;
  const int mover = st.mission_vehicle[static_cast<std::size_t>(j)];
  if (!compatible_vehicle_base(st.inst->fleet[static_cast<std::size_t>(mover)],
                               st.inst->bases[static_cast<std::size_t>(target)]))
    return std::nullopt;

  MoveCandidate c;
  c.kind = MoveKind::RelocateToEmptyBase;
  c.mission = j;
  c.gain_vehicle = mover;
  c.target_base = target;
  c.pool_pos = i;
  c.j_side_vehicle = mover;
  // The vehicle carries every mission it serves to the new base.
  double delta = 0.0;
  for (std::size_t mi = 0; mi < st.mission_vehicle.size(); ++mi) {
    if (st.mission_vehicle[mi] != mover) continue;
    delta += st.table->cost(static_cast<Eigen::Index>(mi), target) -
             st.mission_cost[mi];
  }
  c.quick_delta = delta;
  return c;
}

std::optional<MoveCandidate> eval_reassign(const SearchState& st, int i, int j) {
  if (i < 0 || i >= st.mission_count()) return std::nullopt;
  const int gain = st.mission_vehicle[static_cast<std::size_t>(i)];
  const int loser = st.mission_vehicle[static_cast<std::size_t>(j)];
  if (gain == loser) return std::nullopt;
  const Mission& m = st.inst->missions[static_cast<std::size_t>(j)];
  if (!compatible_vehicle_mission(st.inst->fleet[static_cast<std::size_t>(gain)], m))
    return std::nullopt;

  MoveCandidate c;
  c.kind = MoveKind::ReassignToPlacedVehicle;
  c.mission = j;
  c.gain_vehicle = gain;
  c.j_side_vehicle = loser;
  c.quick_delta = st.table->cost(j, st.vehicle_base[static_cast<std::size_t>(gain)]) -
                  st.mission_cost[static_cast<std::size_t>(j)];
  return c;
}

double candidate_total(const SearchState& st, const MoveCandidate& c) {
  double s = 0.0;
  if (c.kind == MoveKind::RelocateToEmptyBase) {
    for (std::size_t mi = 0; mi < st.mission_cost.size(); ++mi) {
      s += st.mission_vehicle[mi] == c.gain_vehicle
               ? st.table->cost(static_cast<Eigen::Index>(mi), c.target_base)
               : st.mission_cost[mi];
    }
  } else {
    const double new_cost =
        st.table->cost(c.mission,
                       st.vehicle_base[static_cast<std::size_t>(c.gain_vehicle)]);
    for (std::size_t mi = 0; mi < st.mission_cost.size(); ++mi) {
      s += static_cast<int>(mi) == c.mission ? new_cost : st.mission_cost[mi];
    }
  }
  return s;
}

void apply_move(SearchState& st, const MoveCandidate& c) {
  switch (c.kind) {
    case MoveKind::TakeoverByIdleVehicle: {
      const int loser = st.mission_vehicle[static_cast<std::size_t>(c.mission)];
      st.mission_vehicle[static_cast<std::size_t>(c.mission)] = c.gain_vehicle;
      ++st.vehicle_missions[static_cast<std::size_t>(c.gain_vehicle)];
      --st.vehicle_missions[static_cast<std::size_t>(loser)];
      st.mission_cost[static_cast<std::size_t>(c.mission)] = st.table->cost(
          c.mission, st.vehicle_base[static_cast<std::size_t>(c.gain_vehicle)]);
      // The gaining vehicle leaves the pool; the loser takes its slot if it
      // just went idle.
      if (st.vehicle_missions[static_cast<std::size_t>(loser)] == 0)
        st.pool[static_cast<std::size_t>(c.pool_pos)] =
            IndexPoolEntry{PoolEntryKind::IdleVehicle, loser};
      else
        st.pool.erase(st.pool.begin() + c.pool_pos);
      break;
    }
    case MoveKind::RelocateToEmptyBase: {
      const int mover = c.gain_vehicle;
      const int old_base = st.vehicle_base[static_cast<std::size_t>(mover)];
      st.base_vehicle[static_cast<std::size_t>(old_base)] = -1;
      st.base_vehicle[static_cast<std::size_t>(c.target_base)] = mover;
      st.vehicle_base[static_cast<std::size_t>(mover)] = c.target_base;
      for (std::size_t mi = 0; mi < st.mission_vehicle.size(); ++mi) {
        if (st.mission_vehicle[mi] == mover)
          st.mission_cost[mi] =
              st.table->cost(static_cast<Eigen::Index>(mi), c.target_base);
      }
      // Vacated base takes the target's pool slot.
      st.pool[static_cast<std::size_t>(c.pool_pos)] =
          IndexPoolEntry{PoolEntryKind::EmptyBase, old_base};
      break;
    }
    case MoveKind::ReassignToPlacedVehicle: {
      const int loser = st.mission_vehicle[static_cast<std::size_t>(c.mission)];
      st.mission_vehicle[static_cast<std::size_t>(c.mission)] = c.gain_vehicle;
      ++st.vehicle_missions[static_cast<std::size_t>(c.gain_vehicle)];
      --st.vehicle_missions[static_cast<std::size_t>(loser)];
      st.mission_cost[static_cast<std::size_t>(c.mission)] = st.table->cost(
          c.mission, st.vehicle_base[static_cast<std::size_t>(c.gain_vehicle)]);
      // Freshly idled vehicles join at the front: only the first
      // mission-count pool positions are reachable through the outer index,
      // and an idle vehicle is the hottest swap material there is.
      if (st.vehicle_missions[static_cast<std::size_t>(loser)] == 0)
        st.pool.insert(st.pool.begin(),
                       IndexPoolEntry{PoolEntryKind::IdleVehicle, loser});
      break;
    }
  }
  st.total = st.resum();
}

// The entities a pair (i, j) could select right now, keyed the same way
// applied moves record them. i selects the pool entry (takeover target or
// relocation destination) and the reassignment gainer; j selects the
// vehicle a relocation would move.
void candidate_tabu_keys(const SearchState& st, int i, int j,
                         std::vector<TabuKey>& out) {
  out.clear();
  if (i >= 0 && i < static_cast<int>(st.pool.size())) {
    const IndexPoolEntry entry = st.pool[static_cast<std::size_t>(i)];
    if (entry.kind == PoolEntryKind::IdleVehicle)
      out.push_back({MoveKind::TakeoverByIdleVehicle,
                     st.inst->fleet[static_cast<std::size_t>(entry.index)].id});
    else
      out.push_back({MoveKind::RelocateToEmptyBase,
                     st.inst->bases[static_cast<std::size_t>(entry.index)].id});
  }
  if (i >= 0 && i < st.mission_count()) {
    const int vi = st.mission_vehicle[static_cast<std::size_t>(i)];
    out.push_back({MoveKind::ReassignToPlacedVehicle,
                   st.inst->fleet[static_cast<std::size_t>(vi)].id});
  }
  const int vj = st.mission_vehicle[static_cast<std::size_t>(j)];
  out.push_back({MoveKind::RelocateToEmptyBase,
                 st.inst->fleet[static_cast<std::size_t>(vj)].id});
}

TabuKey outer_key(const SearchState& st, const MoveCandidate& c) {
  switch (c.kind) {
    case MoveKind::TakeoverByIdleVehicle:
    case MoveKind::ReassignToPlacedVehicle:
      return {c.kind,
              st.inst->fleet[static_cast<std::size_t>(c.gain_vehicle)].id};
    case MoveKind::RelocateToEmptyBase:
    default:
      return {c.kind,
              st.inst->bases[static_cast<std::size_t>(c.target_base)].id};
  }
}

TabuKey inner_key(const SearchState& st, const MoveCandidate& c) {
  return {c.kind,
          st.inst->fleet[static_cast<std::size_t>(c.j_side_vehicle)].id};
}

void debug_verify_total(const SearchState& st) {
  const Assignment a = st.to_assignment();
  const double full = objective_km(a, *st.inst, *st.table);
  if (std::abs(full - st.total) > 1e-9)
    throw std::logic_error("incremental objective drifted from recomputation");
}

namespace {

// Evaluate-and-apply for one candidate inside the inner loop. Applies only
// strict improvements, verified against the exact substituted total.
template <typename EvalFn>
bool try_move(SearchState& st, EvalFn&& eval, TabuList* tabu,
              bool debug_check, SearchStats* stats) {
  if (stats) ++stats->evaluations;
  const auto cand = eval();
  if (!cand || cand->quick_delta >= 0.0) return false;
  const double after = candidate_total(st, *cand);
  if (!(after < st.total)) return false;

  // Capture keys before the state mutates under us. The entity reached
  // through the outer index is always recorded; a relocation also records
  // the vehicle it moved, which was reached through the inner index.
  const TabuKey key_i = outer_key(st, *cand);
  const TabuKey key_j = inner_key(st, *cand);
  const bool record_inner = cand->kind == MoveKind::RelocateToEmptyBase;
  apply_move(st, *cand);
  if (stats) {
    ++stats->applied_moves;
    ++stats->committed_moves;
  }
  if (tabu) {
    tabu->insert(key_i, TabuRole::OuterIndex);
    if (record_inner) tabu->insert(key_j, TabuRole::InnerIndex);
  }
  if (debug_check) debug_verify_total(st);
  return true;
}

}  // namespace

bool run_row(SearchState& st, int i_val, const std::vector<int>& perm_b,
             TabuList* tabu, bool debug_check_deltas, SearchStats* stats) {
  bool improved = false;
  std::vector<TabuKey> keys;
  for (const int j_val : perm_b) {
    if (tabu) {
      candidate_tabu_keys(st, i_val, j_val, keys);
      bool blocked = false;
      bool outer_blocked = false;
      for (const TabuKey& k : keys) {
        if (const auto role = tabu->role_of(k)) {
          blocked = true;
          if (*role == TabuRole::OuterIndex) outer_blocked = true;
        }
      }
      if (blocked) {
        tabu->decrement_all();
        if (outer_blocked) {
          if (stats) ++stats->tabu_skips_outer;
          return improved;  // next outer index
        }
        if (stats) ++stats->tabu_skips_inner;
        continue;  // next inner index
      }
    }

    improved |= try_move(
        st, [&] { return eval_takeover(st, i_val, j_val); }, tabu,
        debug_check_deltas, stats);
    improved |= try_move(
        st, [&] { return eval_relocate(st, i_val, j_val); }, tabu,
        debug_check_deltas, stats);
    improved |= try_move(
        st, [&] { return eval_reassign(st, i_val, j_val); }, tabu,
        debug_check_deltas, stats);

    if (tabu) tabu->decrement_all();
  }
  return improved;
}

bool row_has_improvement(const SearchState& st, int i_val,
                         const std::vector<int>& perm_b) {
  for (const int j_val : perm_b) {
    const auto accepts = [&](const std::optional<MoveCandidate>& cand) {
      return cand && cand->quick_delta < 0.0 &&
             candidate_total(st, *cand) < st.total;
    };
    if (accepts(eval_takeover(st, i_val, j_val))) return true;
    if (accepts(eval_relocate(st, i_val, j_val))) return true;
    if (accepts(eval_reassign(st, i_val, j_val))) return true;
  }
  return false;
}

}  // namespace detail

UnusedPool initial_pool(const RankedStart& start, const Instance&) {
  UnusedPool pool;
  for (const int bid : start.unused_bases)
    pool.push_back({PoolEntryKind::EmptyBase, bid});

  // Vehicles the ranking placed but never picked for a mission.
  std::map<int, int> served_by;
  for (const auto& [mid, vid] : start.assignment.service) served_by[vid]++;
  for (const auto& [vid, bid] : start.assignment.placement) {
    if (!served_by.contains(vid))
      pool.push_back({PoolEntryKind::IdleVehicle, vid});
  }
  return pool;
}

std::vector<MoveProposal> enumerate_moves(const Assignment& a,
                                          const UnusedPool& pool, int i,
                                          int j_mission, const Instance& inst,
                                          const DistanceTable& t) {
  detail::SearchState st = detail::SearchState::from(a, pool, inst, t);
  const int j = inst.mission_index(j_mission);
  if (j < 0) throw Error("unknown mission id " + std::to_string(j_mission));

  std::vector<MoveProposal> out;
  const auto add = [&](const std::optional<detail::MoveCandidate>& cand) {
    if (!cand) return;
    out.push_back(MoveProposal{cand->kind, i, j_mission,
                               detail::candidate_total(st, *cand) - st.total});
  };
  add(detail::eval_takeover(st, i, j));
  add(detail::eval_relocate(st, i, j));
  add(detail::eval_reassign(st, i, j));
  return out;
}

namespace {

Assignment run_search(const RankedStart& start, const Instance& inst,
                      const DistanceTable& t, const SearchConfig& cfg,
                      TabuList* tabu, SearchStats* stats) {
  detail::SearchState st =
      detail::SearchState::from(start.assignment, initial_pool(start, inst),
                                inst, t);
  Rng rng(cfg.seed);
  const int n = st.mission_count();
  SearchStats acc;
  int passes = 0;
  bool keep_going = true;
  while (keep_going) {
    const std::vector<int> perm_a = random_permutation(n, rng);
    const std::vector<int> perm_b = random_permutation(n, rng);
    const std::uint64_t applied_before = acc.applied_moves;
    const std::uint64_t skips_before =
        acc.tabu_skips_outer + acc.tabu_skips_inner;
    for (const int i_val : perm_a)
      detail::run_row(st, i_val, perm_b, tabu, cfg.debug_check_deltas, &acc);
    const bool improved = acc.applied_moves != applied_before;
    // A pass that applied nothing but skipped blocked pairs has not shown
    // that no further improvement exists; blocks expire on their own, so
    // another pass settles it.
    const bool blocked =
        acc.tabu_skips_outer + acc.tabu_skips_inner != skips_before;
    keep_going = improved || blocked;
    ++passes;
    if (cfg.max_passes && passes >= *cfg.max_passes) break;
  }
  acc.passes = static_cast<std::uint64_t>(passes);
  acc.final_objective_km = st.total;
  if (stats) *stats = acc;
  return st.to_assignment();
}

}  // namespace

Assignment local_search(const RankedStart& start, const Instance& inst,
                        const DistanceTable& t, const SearchConfig& cfg,
                        SearchStats* stats) {
  if (cfg.mode != SearchMode::Local)
    throw std::invalid_argument("local_search requires SearchMode::Local");
  return run_search(start, inst, t, cfg, nullptr, stats);
}

Assignment tabu_search(const RankedStart& start, const Instance& inst,
                       const DistanceTable& t, const SearchConfig& cfg,
                       SearchStats* stats) {
  if (cfg.mode != SearchMode::Tabu)
    throw std::invalid_argument("tabu_search requires SearchMode::Tabu");
  if (cfg.tabu_tenure < 0)
    throw std::invalid_argument("tabu tenure must be positive (0 = auto)");
  const int tenure = cfg.tabu_tenure > 0
                         ? cfg.tabu_tenure
                         : 2 * static_cast<int>(inst.missions.size());
  if (tenure <= 0)
    throw std::invalid_argument("tabu tenure must be positive");
  TabuList tabu(tenure);
  return run_search(start, inst, t, cfg, &tabu, stats);
}

}  // namespace fleetplace
