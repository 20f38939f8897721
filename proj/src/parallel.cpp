#include "fleetplace/parallel.hpp"

#include <atomic>
#include <functional>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include "fleetplace/rng.hpp"
#include "search_state.hpp"

namespace fleetplace {

namespace {

using detail::MoveCandidate;
using detail::SearchState;

void for_each_worker(int workers, const std::function<void(int)>& body) {
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) threads.emplace_back(body, w);
  for (std::thread& th : threads) th.join();
}

}  // namespace

Eigen::VectorXd parallel_rank_totals(const DistanceTable& t,
                                     const ParallelConfig& pcfg) {
  if (pcfg.workers < 1) throw std::invalid_argument("workers must be >= 1");
  const Eigen::Index cols = t.cost.cols();
  Eigen::VectorXd totals(cols);
  if (pcfg.workers == 1 || cols < 2) {
    column_totals_range(t.cost, 0, cols, totals);
    return totals;
  }
  const int workers = static_cast<int>(
      std::min<Eigen::Index>(pcfg.workers, cols));
  for_each_worker(workers, [&](int w) {
    // Contiguous column slices; writes never overlap.
    const Eigen::Index begin = cols * w / workers;
    const Eigen::Index end = cols * (w + 1) / workers;
    column_totals_range(t.cost, begin, end, totals);
  });
  return totals;
}

namespace {

// One pass of the ordered-commit local search. Rows are consumed strictly
// in permutation order. Workers speculate on not-yet-consumed rows against
// the state as of the last applied move; a row provably inert under that
// state is skipped outright, anything else re-runs the sequential row code
// against the live state. The applied-move trajectory is therefore exactly
// the sequential one.
bool parallel_local_pass(SearchState& st, const std::vector<int>& perm_a,
                         const std::vector<int>& perm_b, int workers,
                         bool debug_check, SearchStats* stats) {
  const int n = static_cast<int>(perm_a.size());
  bool improved = false;
  int next_row = 0;
  std::vector<unsigned char> has_candidate(perm_a.size(), 0);

  while (next_row < n) {
    // Speculation phase: state is frozen, reads are unsynchronized.
    std::atomic<int> spec{next_row};
    for_each_worker(workers, [&](int) {
      for (int r = spec.fetch_add(1); r < n; r = spec.fetch_add(1)) {
        has_candidate[static_cast<std::size_t>(r)] =
            detail::row_has_improvement(st, perm_a[static_cast<std::size_t>(r)],
                                        perm_b)
                ? 1
                : 0;
      }
    });

    // Commit phase: walk rows in order until one mutates the state, then
    // re-speculate the remainder.
    while (next_row < n) {
      if (!has_candidate[static_cast<std::size_t>(next_row)]) {
        ++next_row;
        continue;
      }
      const bool any = detail::run_row(
          st, perm_a[static_cast<std::size_t>(next_row)], perm_b, nullptr,
          debug_check, stats);
      improved |= any;
      ++next_row;
      if (any) break;
    }
  }
  return improved;
}

}  // namespace

Assignment parallel_local_search(const RankedStart& start, const Instance& inst,
                                 const DistanceTable& t, const SearchConfig& cfg,
                                 const ParallelConfig& pcfg,
                                 SearchStats* stats) {
  if (cfg.mode != SearchMode::Local)
    throw std::invalid_argument("parallel_local_search requires SearchMode::Local");
  if (pcfg.workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (pcfg.workers == 1) return local_search(start, inst, t, cfg, stats);

  SearchState st = SearchState::from(start.assignment,
                                     initial_pool(start, inst), inst, t);
  Rng rng(cfg.seed);
  const int n = st.mission_count();
  int passes = 0;
  bool improved = true;
  while (improved) {
    const std::vector<int> perm_a = random_permutation(n, rng);
    const std::vector<int> perm_b = random_permutation(n, rng);
    improved = parallel_local_pass(st, perm_a, perm_b, pcfg.workers,
                                   cfg.debug_check_deltas, stats);
    ++passes;
    if (cfg.max_passes && passes >= *cfg.max_passes) break;
  }
  if (stats) {
    stats->passes = static_cast<std::uint64_t>(passes);
    stats->final_objective_km = st.total;
  }
  return st.to_assignment();
}

namespace {

// Shared tabu bookkeeping for the free-running variant. Entries carry an
// expiry stamp against a shared clock that advances once per inner-loop
// iteration across all workers; that is the counter-decrement semantics of
// the sequential list without the per-tick map walk. One mutex serializes
// every check-or-insert.
struct SharedTabu {
  std::mutex mx;
  int tenure;
  std::atomic<std::uint64_t> clock{0};
  std::map<TabuKey, std::pair<std::uint64_t, TabuRole>> entries;

  explicit SharedTabu(int tenure_) : tenure(tenure_) {}

  std::uint64_t tick() { return clock.fetch_add(1, std::memory_order_relaxed); }

  // Requires mx. Lazily erases entries the clock has passed.
  std::optional<TabuRole> live_role(const TabuKey& key, std::uint64_t now) {
    const auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    if (it->second.first <= now) {
      entries.erase(it);
      return std::nullopt;
    }
    return it->second.second;
  }

  // Requires mx.
  void insert(const TabuKey& key, TabuRole role, std::uint64_t now) {
    entries[key] = {now + static_cast<std::uint64_t>(tenure), role};
  }
};

// Worker body: pulls outer rows from a shared counter, evaluates under a
// shared lock, commits under an exclusive lock with re-validation.
void tabu_worker(SearchState& st, std::shared_mutex& state_mx, SharedTabu& tabu,
                 const std::vector<int>& perm_a, const std::vector<int>& perm_b,
                 std::atomic<int>& next_pos, std::atomic<bool>& any_improved,
                 std::atomic<bool>& any_blocked, bool debug_check,
                 SearchStats* local_stats) {
  const int n = static_cast<int>(perm_a.size());
  std::vector<TabuKey> keys;

  for (int p = next_pos.fetch_add(1); p < n; p = next_pos.fetch_add(1)) {
    const int i_val = perm_a[static_cast<std::size_t>(p)];
    bool abandon_row = false;
    for (const int j_val : perm_b) {
      if (abandon_row) break;

      // One clock tick per inner iteration, matching the sequential
      // per-iteration counter decrement.
      const std::uint64_t now = tabu.tick();
      {
        std::shared_lock read(state_mx);
        detail::candidate_tabu_keys(st, i_val, j_val, keys);
        std::lock_guard tabu_lock(tabu.mx);
        bool blocked = false;
        bool outer_blocked = false;
        for (const TabuKey& k : keys) {
          if (const auto role = tabu.live_role(k, now)) {
            blocked = true;
            if (*role == TabuRole::OuterIndex) outer_blocked = true;
          }
        }
        if (blocked) {
          any_blocked.store(true, std::memory_order_relaxed);
          if (outer_blocked) {
            if (local_stats) ++local_stats->tabu_skips_outer;
            abandon_row = true;
          } else {
            if (local_stats) ++local_stats->tabu_skips_inner;
          }
          continue;
        }
      }

      using Eval = std::optional<MoveCandidate> (*)(const SearchState&, int, int);
      static constexpr Eval kEvals[] = {detail::eval_takeover,
                                        detail::eval_relocate,
                                        detail::eval_reassign};
      for (const Eval eval : kEvals) {
        if (local_stats) ++local_stats->evaluations;
        bool promising;
        {
          std::shared_lock read(state_mx);
          const auto cand = eval(st, i_val, j_val);
          promising = cand && cand->quick_delta < 0.0;
        }
        if (!promising) continue;

        // Exclusive commit: the world may have moved, so re-derive the
        // candidate and accept only a still-strict improvement.
        std::unique_lock write(state_mx);
        const auto cand = eval(st, i_val, j_val);
        if (!cand || cand->quick_delta >= 0.0) continue;
        const double after = detail::candidate_total(st, *cand);
        if (!(after < st.total)) continue;
        const TabuKey key_i = detail::outer_key(st, *cand);
        const TabuKey key_j = detail::inner_key(st, *cand);
        const bool record_inner =
            cand->kind == MoveKind::RelocateToEmptyBase;
        detail::apply_move(st, *cand);
        if (local_stats) {
          ++local_stats->applied_moves;
          ++local_stats->committed_moves;
        }
        any_improved.store(true, std::memory_order_relaxed);
        if (debug_check) detail::debug_verify_total(st);
        const std::uint64_t at = tabu.clock.load(std::memory_order_relaxed);
        std::lock_guard tabu_lock(tabu.mx);
        tabu.insert(key_i, TabuRole::OuterIndex, at);
        if (record_inner) tabu.insert(key_j, TabuRole::InnerIndex, at);
      }
    }
  }
}

}  // namespace

Assignment parallel_tabu_search(const RankedStart& start, const Instance& inst,
                                const DistanceTable& t, const SearchConfig& cfg,
                                const ParallelConfig& pcfg,
                                SearchStats* stats) {
  if (cfg.mode != SearchMode::Tabu)
    throw std::invalid_argument("parallel_tabu_search requires SearchMode::Tabu");
  if (pcfg.workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (cfg.tabu_tenure < 0)
    throw std::invalid_argument("tabu tenure must be positive (0 = auto)");
  if (pcfg.workers == 1) return tabu_search(start, inst, t, cfg, stats);

  const int tenure = cfg.tabu_tenure > 0
                         ? cfg.tabu_tenure
                         : 2 * static_cast<int>(inst.missions.size());
  SearchState st = SearchState::from(start.assignment,
                                     initial_pool(start, inst), inst, t);
  std::shared_mutex state_mx;
  SharedTabu tabu(tenure);
  Rng rng(cfg.seed);
  const int n = st.mission_count();

  std::vector<SearchStats> worker_stats(
      static_cast<std::size_t>(pcfg.workers));
  int passes = 0;
  bool keep_going = true;
  while (keep_going) {
    const std::vector<int> perm_a = random_permutation(n, rng);
    const std::vector<int> perm_b = random_permutation(n, rng);
    std::atomic<int> next_pos{0};
    std::atomic<bool> any_improved{false};
    std::atomic<bool> any_blocked{false};
    for_each_worker(pcfg.workers, [&](int w) {
      tabu_worker(st, state_mx, tabu, perm_a, perm_b, next_pos, any_improved,
                  any_blocked, cfg.debug_check_deltas,
                  stats ? &worker_stats[static_cast<std::size_t>(w)] : nullptr);
    });
    // A pass that only skipped blocked pairs has not proven quiescence;
    // entries expire with the clock, so another pass settles it.
    keep_going = any_improved.load() || any_blocked.load();
    ++passes;
    if (cfg.max_passes && passes >= *cfg.max_passes) break;
  }

  if (stats) {
    for (const SearchStats& ws : worker_stats) {
      stats->evaluations += ws.evaluations;
      stats->applied_moves += ws.applied_moves;
      stats->committed_moves += ws.committed_moves;
      stats->tabu_skips_outer += ws.tabu_skips_outer;
      stats->tabu_skips_inner += ws.tabu_skips_inner;
    }
    stats->passes = static_cast<std::uint64_t>(passes);
    stats->final_objective_km = st.total;
  }
  return st.to_assignment();
}

}  // namespace fleetplace
