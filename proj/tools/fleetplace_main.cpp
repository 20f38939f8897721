#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fleetplace/bench.hpp"
#include "fleetplace/data.hpp"
#include "fleetplace/errors.hpp"
#include "fleetplace/exact.hpp"

namespace fp = fleetplace;

namespace {

int default_workers() {
  if (const char* env = std::getenv("FLEETPLACE_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  return 1;
}

struct InstancePaths {
  std::string dir;

  std::string bases() const { return dir + "/bases.csv"; }
  std::string missions() const { return dir + "/missions.csv"; }
  std::string fleet() const { return dir + "/fleet.csv"; }

  fp::Instance load() const {
    return fp::load_instance(bases(), missions(), fleet());
  }
};

void write_assignment(const std::string& path, const fp::Assignment& a) {
  std::ofstream out(path);
  if (!out) throw fp::Error("cannot write " + path);
  out << fp::assignment_to_json(a).dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"air fleet placement solver and benchmark"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "synthesize a pool and write an instance");
  std::string gen_out = ".";
  std::uint64_t gen_seed = 1;
  int gen_missions = 80;
  double gen_rotary_frac = 0.3;
  fp::PoolCounts gen_counts;
  int gen_rotary = 8, gen_fixed = 4;
  std::vector<double> gen_bbox = {42.0, 57.0, -96.0, -74.0};
  int gen_clusters = 5;
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--seed", gen_seed, "generation seed");
  gen->add_option("--missions", gen_missions, "mission count");
  gen->add_option("--rotary-frac", gen_rotary_frac, "rotary-only mission fraction");
  gen->add_option("--pool-aerodromes", gen_counts.aerodromes, "aerodromes in the pool");
  gen->add_option("--pool-helipads", gen_counts.helipads, "helipads in the pool");
  gen->add_option("--pool-health", gen_counts.health_sites, "health sites in the pool");
  gen->add_option("--rotary", gen_rotary, "rotary-wing vehicles");
  gen->add_option("--fixed", gen_fixed, "fixed-wing vehicles");
  gen->add_option("--bbox", gen_bbox, "lat_min lat_max lon_min lon_max")->expected(4);
  gen->add_option("--clusters", gen_clusters, "urban cluster count");

  // rank
  auto* rank_cmd = app.add_subcommand("rank", "base-ranking start for an instance");
  InstancePaths rank_paths;
  std::string rank_out;
  rank_cmd->add_option("--instance", rank_paths.dir, "instance directory")->required();
  rank_cmd->add_option("--out", rank_out, "assignment JSON output");

  // solve
  auto* solve = app.add_subcommand("solve", "rank then improve with local or tabu search");
  InstancePaths solve_paths;
  std::string solve_mode = "tabu";
  std::string solve_out;
  std::uint64_t solve_seed = 1;
  int solve_tenure = 0;
  int solve_workers = default_workers();
  solve->add_option("--instance", solve_paths.dir, "instance directory")->required();
  solve->add_option("--mode", solve_mode, "local | tabu")
      ->check(CLI::IsMember({"local", "tabu"}));
  solve->add_option("--seed", solve_seed, "search seed");
  solve->add_option("--tenure", solve_tenure, "tabu tenure (0 = 2 x missions)");
  solve->add_option("--workers", solve_workers, "worker count (1 = sequential)");
  solve->add_option("--out", solve_out, "assignment JSON output");

  // exact
  auto* exact_cmd = app.add_subcommand("exact", "brute-force optimum for tiny instances");
  InstancePaths exact_paths;
  std::uint64_t exact_budget = fp::kDefaultEnumerationBudget;
  std::string exact_out;
  exact_cmd->add_option("--instance", exact_paths.dir, "instance directory")->required();
  exact_cmd->add_option("--budget", exact_budget, "enumeration budget");
  exact_cmd->add_option("--out", exact_out, "assignment JSON output");

  // export-milp
  auto* milp = app.add_subcommand("export-milp", "write the binary program as LP or MPS");
  InstancePaths milp_paths;
  std::string milp_format = "lp";
  std::string milp_out;
  milp->add_option("--instance", milp_paths.dir, "instance directory")->required();
  milp->add_option("--format", milp_format, "lp | mps")
      ->check(CLI::IsMember({"lp", "mps"}));
  milp->add_option("--out", milp_out, "model file")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "multi-attempt experiment with U/L/A report");
  InstancePaths bench_paths;
  std::string bench_out = "run";
  std::vector<std::string> bench_algorithms = {"local", "tabu"};
  int bench_attempts = 10;
  std::uint64_t bench_seed = 1;
  int bench_tenure = 0;
  int bench_workers = default_workers();
  int bench_random_starts = 0;
  double bench_exact = -1.0;
  std::uint64_t bench_exact_budget = 0;
  std::string bench_solution;
  bench->add_option("--instance", bench_paths.dir, "instance directory")->required();
  bench->add_option("--out", bench_out, "run directory");
  bench->add_option("--algorithms", bench_algorithms,
                    "subset of: local tabu parallel-local parallel-tabu");
  bench->add_option("--attempts", bench_attempts, "attempts per algorithm");
  bench->add_option("--seed", bench_seed, "base seed; attempt t uses seed+t");
  bench->add_option("--tenure", bench_tenure, "tabu tenure (0 = 2 x missions)");
  bench->add_option("--workers", bench_workers, "workers for parallel algorithms");
  bench->add_option("--random-starts", bench_random_starts,
                    "random-start baseline sample size (0 = off)");
  bench->add_option("--exact-km", bench_exact, "known exact objective");
  bench->add_option("--exact-budget", bench_exact_budget,
                    "run the brute-force oracle with this budget");
  bench->add_option("--milp-solution", bench_solution,
                    "solver solution file to import as the exact reference");

  // plot-data
  auto* plot = app.add_subcommand("plot-data", "gap and timing curves from report JSONs");
  std::vector<std::string> plot_reports;
  std::string plot_out = ".";
  plot->add_option("--reports", plot_reports, "report.json files")->required();
  plot->add_option("--out", plot_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const fp::BoundingBox box{gen_bbox[0], gen_bbox[1], gen_bbox[2], gen_bbox[3]};
      fp::PoolShape shape;
      shape.clusters = gen_clusters;
      const fp::FacilityPool pool =
          fp::synthesize_pool(gen_seed, box, gen_counts, shape);
      const fp::Instance inst = fp::generate_instance(
          pool, gen_missions, gen_rotary_frac, gen_seed, gen_rotary, gen_fixed);
      std::filesystem::create_directories(gen_out);
      fp::save_instance(inst, gen_out + "/bases.csv", gen_out + "/missions.csv",
                        gen_out + "/fleet.csv");
      std::cout << "wrote " << inst.bases.size() << " bases, "
                << inst.fleet.size() << " vehicles, " << inst.missions.size()
                << " missions to " << gen_out << '\n';
    } else if (*rank_cmd) {
      const fp::Instance inst = rank_paths.load();
      const fp::DistanceTable table = fp::build_distance_table(inst);
      const fp::RankedStart start = fp::rank_bases(inst, table);
      const double obj = fp::objective_km(start.assignment, inst, table);
      std::cout << "rank objective_km " << obj << '\n';
      if (!rank_out.empty()) write_assignment(rank_out, start.assignment);
    } else if (*solve) {
      const fp::Instance inst = solve_paths.load();
      const fp::DistanceTable table = fp::build_distance_table(inst);
      const fp::RankedStart start = fp::rank_bases(inst, table);
      fp::SearchConfig cfg;
      cfg.seed = solve_seed;
      cfg.tabu_tenure = solve_tenure;
      cfg.mode = solve_mode == "local" ? fp::SearchMode::Local : fp::SearchMode::Tabu;
      fp::ParallelConfig pcfg{solve_workers};
      fp::Assignment result;
      if (cfg.mode == fp::SearchMode::Local) {
        result = solve_workers > 1
                     ? fp::parallel_local_search(start, inst, table, cfg, pcfg)
                     : fp::local_search(start, inst, table, cfg);
      } else {
        result = solve_workers > 1
                     ? fp::parallel_tabu_search(start, inst, table, cfg, pcfg)
                     : fp::tabu_search(start, inst, table, cfg);
      }
      std::cout << solve_mode << " objective_km "
                << fp::objective_km(result, inst, table) << '\n';
      if (!solve_out.empty()) write_assignment(solve_out, result);
    } else if (*exact_cmd) {
      const fp::Instance inst = exact_paths.load();
      const fp::ExactResult result = fp::brute_force_optimal(inst, exact_budget);
      std::cout << "exact objective_km " << result.objective_km
                << " (placements " << result.nodes_enumerated << ")\n";
      if (!exact_out.empty()) write_assignment(exact_out, result.assignment);
    } else if (*milp) {
      const fp::Instance inst = milp_paths.load();
      const fp::DistanceTable table = fp::build_distance_table(inst);
      const std::string text = fp::export_milp(
          inst, table,
          milp_format == "lp" ? fp::MilpFormat::Lp : fp::MilpFormat::Mps);
      std::ofstream out(milp_out);
      if (!out) throw fp::Error("cannot write " + milp_out);
      out << text;
      std::cout << "wrote " << milp_out << '\n';
    } else if (*bench) {
      const fp::Instance inst = bench_paths.load();
      fp::ExperimentConfig cfg;
      for (const std::string& name : bench_algorithms) {
        const auto alg = fp::algorithm_from_string(name);
        if (!alg) throw fp::Error("unknown algorithm '" + name + "'");
        cfg.algorithms.push_back(*alg);
      }
      cfg.attempts = bench_attempts;
      cfg.seed = bench_seed;
      cfg.tabu_tenure = bench_tenure;
      cfg.pcfg.workers = bench_workers;
      cfg.random_starts = bench_random_starts;
      if (bench_exact >= 0.0) {
        cfg.exact_km = bench_exact;
      } else if (!bench_solution.empty()) {
        const fp::DistanceTable table = fp::build_distance_table(inst);
        const fp::Assignment imported =
            fp::import_solution_file(bench_solution, inst);
        cfg.exact_km = fp::objective_km(imported, inst, table);
      } else if (bench_exact_budget > 0) {
        cfg.exact_km = fp::brute_force_optimal(inst, bench_exact_budget).objective_km;
      }
      const fp::RunReport report = fp::run_experiment(inst, cfg);
      fp::write_run_directory(bench_out, inst, cfg, report);
      fp::emit_report_csv(report, std::cout);
    } else if (*plot) {
      std::vector<fp::RunReport> reports;
      for (const std::string& path : plot_reports) {
        std::ifstream in(path);
        if (!in) throw fp::Error("cannot open " + path);
        nlohmann::json j;
        in >> j;
        reports.push_back(fp::report_from_json(j));
      }
      std::filesystem::create_directories(plot_out);
      std::ofstream gap_out(plot_out + "/plot_gap.csv");
      std::ofstream time_out(plot_out + "/plot_time.csv");
      fp::emit_plot_data(reports, gap_out, time_out);
      std::cout << "wrote " << plot_out << "/plot_gap.csv and "
                << plot_out << "/plot_time.csv\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
