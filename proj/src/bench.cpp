#include "fleetplace/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "fleetplace/data.hpp"
#include "fleetplace/errors.hpp"

namespace fleetplace {

namespace {

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::LocalSearch: return "local";
    case Algorithm::TabuSearch: return "tabu";
    case Algorithm::ParallelLocalSearch: return "parallel-local";
    case Algorithm::ParallelTabuSearch: return "parallel-tabu";
  }
  return "?";
}

std::optional<Algorithm> algorithm_from_string(const std::string& s) {
  if (s == "local") return Algorithm::LocalSearch;
  if (s == "tabu") return Algorithm::TabuSearch;
  if (s == "parallel-local") return Algorithm::ParallelLocalSearch;
  if (s == "parallel-tabu") return Algorithm::ParallelTabuSearch;
  return std::nullopt;
}

Assignment random_feasible_assignment(const Instance& inst, Rng& rng) {
  Assignment a;

  // Fixed wings first onto distinct random aerodromes, then rotary wings
  // onto whatever distinct bases remain.
  std::vector<int> aerodromes, all_bases;
  for (std::size_t bi = 0; bi < inst.bases.size(); ++bi) {
    all_bases.push_back(static_cast<int>(bi));
    if (inst.bases[bi].kind == BaseKind::Aerodrome)
      aerodromes.push_back(static_cast<int>(bi));
  }
  shuffle_in_place(aerodromes, rng);
  std::vector<bool> used(inst.bases.size(), false);
  std::size_t next_aero = 0;
  for (const Vehicle& v : inst.fleet) {
    if (v.kind != VehicleKind::FixedWing) continue;
    const int bi = aerodromes.at(next_aero++);
    used[static_cast<std::size_t>(bi)] = true;
    a.placement[v.id] = inst.bases[static_cast<std::size_t>(bi)].id;
  }
  std::vector<int> remaining;
  for (int bi : all_bases)
    if (!used[static_cast<std::size_t>(bi)]) remaining.push_back(bi);
  shuffle_in_place(remaining, rng);
  std::size_t next_any = 0;
  for (const Vehicle& v : inst.fleet) {
    if (v.kind != VehicleKind::RotaryWing) continue;
    const int bi = remaining.at(next_any++);
    a.placement[v.id] = inst.bases[static_cast<std::size_t>(bi)].id;
  }

  // Each mission picks uniformly among compatible vehicles.
  std::vector<int> candidates;
  for (const Mission& m : inst.missions) {
    candidates.clear();
    for (const Vehicle& v : inst.fleet)
      if (compatible_vehicle_mission(v, m)) candidates.push_back(v.id);
    if (candidates.empty())
      throw InfeasibleError("mission " + std::to_string(m.id) +
                            " has no compatible vehicle");
    a.service[m.id] = candidates[uniform_below(rng, candidates.size())];
  }
  return a;
}

double random_start_mean_km(const Instance& inst, const DistanceTable& t,
                            int n_starts, std::uint64_t seed) {
  Rng rng(seed);
  double sum = 0.0;
  for (int i = 0; i < n_starts; ++i)
    sum += objective_km(random_feasible_assignment(inst, rng), inst, t);
  return sum / n_starts;
}

RunReport run_experiment(const Instance& inst, const ExperimentConfig& cfg) {
  if (cfg.attempts < 1) throw Error("attempts must be >= 1");
  validate_instance(inst);

  RunReport report;
  report.mission_count = static_cast<int>(inst.missions.size());
  report.base_seed = cfg.seed;

  const DistanceTable table = build_distance_table(inst);
  const auto rank_t0 = std::chrono::steady_clock::now();
  const RankedStart start = rank_bases(inst, table);
  report.rank_seconds = elapsed_seconds(rank_t0);
  report.rank_objective_km = objective_km(start.assignment, inst, table);
  report.exact_km = cfg.exact_km;
  if (cfg.random_starts > 0)
    report.random_start_mean_km =
        random_start_mean_km(inst, table, cfg.random_starts, cfg.seed);

  for (const Algorithm alg : cfg.algorithms) {
    AlgorithmSummary summary;
    summary.algorithm = alg;

    for (int attempt = 0; attempt < cfg.attempts; ++attempt) {
      AttemptResult res;
      res.seed = cfg.seed + static_cast<std::uint64_t>(attempt);
      SearchConfig scfg;
      scfg.seed = res.seed;
      scfg.tabu_tenure = cfg.tabu_tenure;
      try {
        Assignment solution;
        const auto t0 = std::chrono::steady_clock::now();
        switch (alg) {
          case Algorithm::LocalSearch:
            scfg.mode = SearchMode::Local;
            solution = local_search(start, inst, table, scfg);
            break;
          case Algorithm::TabuSearch:
            scfg.mode = SearchMode::Tabu;
            solution = tabu_search(start, inst, table, scfg);
            break;
          case Algorithm::ParallelLocalSearch:
            scfg.mode = SearchMode::Local;
            solution = parallel_local_search(start, inst, table, scfg, cfg.pcfg);
            break;
          case Algorithm::ParallelTabuSearch:
            scfg.mode = SearchMode::Tabu;
            solution = parallel_tabu_search(start, inst, table, scfg, cfg.pcfg);
            break;
        }
        res.seconds = elapsed_seconds(t0);
        // Never trust search-internal accounting: re-check feasibility and
        // recompute the objective from the assignment itself.
        res.objective_km = objective_km(solution, inst, table);
      } catch (const std::exception& e) {
        res.error = e.what();
      }
      summary.attempts.push_back(std::move(res));
    }

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    double sum = 0.0, sum_s = 0.0;
    int ok = 0;
    for (const AttemptResult& res : summary.attempts) {
      if (res.error) continue;
      lo = std::min(lo, res.objective_km);
      hi = std::max(hi, res.objective_km);
      sum += res.objective_km;
      sum_s += res.seconds;
      ++ok;
    }
    if (ok > 0) {
      summary.lower_km = lo;
      summary.upper_km = hi;
      summary.average_km = sum / ok;
      summary.mean_seconds = sum_s / ok;
      if (report.exact_km && *report.exact_km > 0.0)
        summary.gap_pct =
            (summary.average_km - *report.exact_km) / *report.exact_km * 100.0;
    }
    report.algorithms.push_back(std::move(summary));
  }
  return report;
}

void emit_report_csv(const RunReport& report, std::ostream& out) {
  out << "missions,algorithm,U,L,A,exact,gap_pct,mean_seconds\n";
  for (const AlgorithmSummary& s : report.algorithms) {
    out << report.mission_count << ',' << to_string(s.algorithm) << ','
        << csv_num(s.upper_km) << ',' << csv_num(s.lower_km) << ','
        << csv_num(s.average_km) << ',';
    if (report.exact_km) out << csv_num(*report.exact_km);
    out << ',';
    if (s.gap_pct) out << csv_num(*s.gap_pct);
    out << ',' << csv_num(s.mean_seconds) << '\n';
  }
}

nlohmann::json report_to_json(const RunReport& report) {
  nlohmann::json j;
  j["missions"] = report.mission_count;
  j["base_seed"] = report.base_seed;
  j["rank_objective_km"] = report.rank_objective_km;
  j["rank_seconds"] = report.rank_seconds;
  if (report.exact_km) j["exact_km"] = *report.exact_km;
  if (report.random_start_mean_km)
    j["random_start_mean_km"] = *report.random_start_mean_km;
  j["algorithms"] = nlohmann::json::array();
  for (const AlgorithmSummary& s : report.algorithms) {
    nlohmann::json a;
    a["algorithm"] = to_string(s.algorithm);
    a["U"] = s.upper_km;
    a["L"] = s.lower_km;
    a["A"] = s.average_km;
    a["mean_seconds"] = s.mean_seconds;
    if (s.gap_pct) a["gap_pct"] = *s.gap_pct;
    a["attempts"] = nlohmann::json::array();
    for (const AttemptResult& r : s.attempts) {
      nlohmann::json at;
      at["seed"] = r.seed;
      at["objective_km"] = r.objective_km;
      at["seconds"] = r.seconds;
      if (r.error) at["error"] = *r.error;
      a["attempts"].push_back(at);
    }
    j["algorithms"].push_back(a);
  }
  return j;
}

RunReport report_from_json(const nlohmann::json& j) {
  RunReport report;
  report.mission_count = j.at("missions").get<int>();
  report.base_seed = j.at("base_seed").get<std::uint64_t>();
  report.rank_objective_km = j.at("rank_objective_km").get<double>();
  report.rank_seconds = j.at("rank_seconds").get<double>();
  if (j.contains("exact_km")) report.exact_km = j["exact_km"].get<double>();
  if (j.contains("random_start_mean_km"))
    report.random_start_mean_km = j["random_start_mean_km"].get<double>();
  for (const auto& a : j.at("algorithms")) {
    AlgorithmSummary s;
    const auto alg = algorithm_from_string(a.at("algorithm").get<std::string>());
    if (!alg) throw Error("unknown algorithm in report");
    s.algorithm = *alg;
    s.upper_km = a.at("U").get<double>();
    s.lower_km = a.at("L").get<double>();
    s.average_km = a.at("A").get<double>();
    s.mean_seconds = a.at("mean_seconds").get<double>();
    if (a.contains("gap_pct")) s.gap_pct = a["gap_pct"].get<double>();
    for (const auto& at : a.at("attempts")) {
      AttemptResult r;
      r.seed = at.at("seed").get<std::uint64_t>();
      r.objective_km = at.at("objective_km").get<double>();
      r.seconds = at.at("seconds").get<double>();
      if (at.contains("error")) r.error = at["error"].get<std::string>();
      s.attempts.push_back(std::move(r));
    }
    report.algorithms.push_back(std::move(s));
  }
  return report;
}

void emit_plot_data(const std::vector<RunReport>& reports,
                    std::ostream& gap_out, std::ostream& time_out) {
  if (reports.size() < 2)
    throw Error("plot data needs reports for at least two mission counts");

  std::vector<const RunReport*> sorted;
  for (const RunReport& r : reports) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const RunReport* a, const RunReport* b) {
              return a->mission_count < b->mission_count;
            });

  gap_out << "missions,algorithm,objective_km,gap_pct\n";
  time_out << "missions,algorithm,mean_seconds,log10_mean_seconds\n";
  for (const RunReport* r : sorted) {
    const auto gap_row = [&](const std::string& name, double value) {
      gap_out << r->mission_count << ',' << name << ',' << csv_num(value) << ',';
      if (r->exact_km && *r->exact_km > 0.0)
        gap_out << csv_num((value - *r->exact_km) / *r->exact_km * 100.0);
      gap_out << '\n';
    };
    gap_row("rank", r->rank_objective_km);
    if (r->random_start_mean_km)
      gap_row("random-start-mean", *r->random_start_mean_km);
    if (r->exact_km) gap_row("exact", *r->exact_km);
    for (const AlgorithmSummary& s : r->algorithms) {
      gap_row(to_string(s.algorithm), s.average_km);
      time_out << r->mission_count << ',' << to_string(s.algorithm) << ','
               << csv_num(s.mean_seconds) << ',';
      if (s.mean_seconds > 0.0)
        time_out << csv_num(std::log10(s.mean_seconds));
      time_out << '\n';
    }
  }
}

std::string instance_hash_hex(const Instance& inst) {
  const std::string canon = instance_to_json(inst).dump();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (const unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

void write_run_directory(const std::string& dir, const Instance& inst,
                         const ExperimentConfig& cfg, const RunReport& report) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  {
    std::ofstream out(fs::path(dir) / "report.csv");
    emit_report_csv(report, out);
  }
  {
    std::ofstream out(fs::path(dir) / "report.json");
    out << report_to_json(report).dump(2) << '\n';
  }
  {
    nlohmann::json manifest;
    manifest["instance_hash"] = instance_hash_hex(inst);
    manifest["version"] = kVersion;
    manifest["config"] = {
        {"attempts", cfg.attempts},
        {"seed", cfg.seed},
        {"tabu_tenure", cfg.tabu_tenure},
        {"workers", cfg.pcfg.workers},
    };
    nlohmann::json algs = nlohmann::json::array();
    for (const Algorithm a : cfg.algorithms) algs.push_back(to_string(a));
    manifest["config"]["algorithms"] = algs;
    std::ofstream out(fs::path(dir) / "manifest.json");
    out << manifest.dump(2) << '\n';
  }
}

}  // namespace fleetplace
