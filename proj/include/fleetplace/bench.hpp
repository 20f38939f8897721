#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fleetplace/parallel.hpp"
#include "fleetplace/rng.hpp"

namespace fleetplace {

enum class Algorithm {
  LocalSearch,
  TabuSearch,
  ParallelLocalSearch,
  ParallelTabuSearch,
};

std::string to_string(Algorithm a);
std::optional<Algorithm> algorithm_from_string(const std::string& s);

struct AttemptResult {
  std::uint64_t seed = 0;
  double objective_km = 0.0;
  double seconds = 0.0;
  std::optional<std::string> error;  // attempt failed; excluded from aggregates
};

struct AlgorithmSummary {
  Algorithm algorithm = Algorithm::LocalSearch;
  std::vector<AttemptResult> attempts;
  double upper_km = 0.0;    // U: worst attempt
  double lower_km = 0.0;    // L: best attempt
  double average_km = 0.0;  // A
  double mean_seconds = 0.0;
  std::optional<double> gap_pct;  // (A - exact) / exact * 100
};

struct RunReport {
  int mission_count = 0;
  std::uint64_t base_seed = 0;
  double rank_objective_km = 0.0;
  double rank_seconds = 0.0;
  std::optional<double> exact_km;
  std::optional<double> random_start_mean_km;
  std::vector<AlgorithmSummary> algorithms;
};

struct ExperimentConfig {
  std::vector<Algorithm> algorithms;
  int attempts = 10;
  std::uint64_t seed = 1;  // attempt t runs with seed + t
  int tabu_tenure = 0;
  ParallelConfig pcfg;
  std::optional<double> exact_km;
  // Attempts for the random-start baseline; 0 disables it.
  int random_starts = 0;
};

// Uniformly random feasible placement plus uniformly random compatible
// service choices; the baseline the ranking must beat.
Assignment random_feasible_assignment(const Instance& inst, Rng& rng);

// Mean objective over n random starts.
double random_start_mean_km(const Instance& inst, const DistanceTable& t,
                            int n_starts, std::uint64_t seed);

// Ranks once, then runs each requested algorithm for cfg.attempts attempts
// with seeds seed+0 .. seed+attempts-1. Every recorded objective is
// recomputed through objective_km from the returned assignment; timing
// covers the search call only. A failing attempt records its error and the
// remaining attempts continue.
RunReport run_experiment(const Instance& inst, const ExperimentConfig& cfg);

// CSV schema: missions,algorithm,U,L,A,exact,gap_pct,mean_seconds.
// Absent exact leaves exact and gap_pct cells empty.
void emit_report_csv(const RunReport& report, std::ostream& out);

nlohmann::json report_to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::json& j);

// Plot-ready tables across mission counts.
//   gap_out:  missions,algorithm,gap_pct (blank cell when exact is missing),
//             plus rank/random baseline rows when recorded
//   time_out: missions,algorithm,mean_seconds,log10_mean_seconds
void emit_plot_data(const std::vector<RunReport>& reports,
                    std::ostream& gap_out, std::ostream& time_out);

// FNV-1a over the canonical JSON encoding; identifies instances in run
// manifests.
std::string instance_hash_hex(const Instance& inst);

// report.csv, report.json, and manifest.json under dir (created if needed).
void write_run_directory(const std::string& dir, const Instance& inst,
                         const ExperimentConfig& cfg, const RunReport& report);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fleetplace
