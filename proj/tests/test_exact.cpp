#include <doctest.h>

#include <sstream>

#include "fleetplace/errors.hpp"
#include "fleetplace/exact.hpp"
#include "fleetplace/rank.hpp"
#include "fleetplace/search.hpp"
#include "lp_eval.hpp"
#include "test_helpers.hpp"

using namespace fleetplace;

TEST_CASE("brute force picks the near base") {
  Instance inst;
  inst.bases = {
      {0, BaseKind::Aerodrome, {45.0, -75.0}},   // near the mission
      {1, BaseKind::Aerodrome, {52.0, -90.0}},   // far away
  };
  inst.fleet = {{0, VehicleKind::RotaryWing}};
  inst.missions = {{0, {45.1, -75.1}, {44.9, -74.9}, false}};

  const ExactResult res = brute_force_optimal(inst);
  CHECK(res.assignment.placement.at(0) == 0);
  CHECK(res.assignment.service.at(0) == 0);
  CHECK(res.nodes_enumerated == 2);
}

TEST_CASE("brute force reproduces the hand-enumerated tiny optimum") {
  const Instance inst = helpers::tiny_instance();
  const ExactResult res = brute_force_optimal(inst);

  CHECK(res.assignment == helpers::tiny_optimal_assignment());
  CHECK(res.objective_km ==
        doctest::Approx(helpers::kTinyOptimumKm).epsilon(1e-12));
  // 3 ordered base pairs for (rotary, fixed), minus the one placing the
  // fixed wing on the helipad... all distinct pairs where slot 2 is an
  // aerodrome: rotary has 3 choices, fixed the remaining aerodromes.
  CHECK(res.nodes_enumerated == 4);

  const DistanceTable t = build_distance_table(inst);
  CHECK(res.objective_km == objective_km(res.assignment, inst, t));
}

TEST_CASE("brute force reports infeasibility") {
  Instance inst = helpers::tiny_instance();
  inst.fleet = {{1, VehicleKind::FixedWing}, {2, VehicleKind::FixedWing}};
  // Mission 100 is rotary-only; an all-fixed-wing fleet cannot serve it.
  CHECK_THROWS_AS(brute_force_optimal(inst), InfeasibleError);
}

TEST_CASE("brute force budget guard") {
  const Instance inst = helpers::small_generated(8, 6, 10, 5);
  CHECK_THROWS_AS(brute_force_optimal(inst, 10), BudgetExceededError);
}

TEST_CASE("brute force never loses to any other module's assignment") {
  Rng rng(424242);
  int instances_checked = 0;
  for (int round = 0; round < 100; ++round) {
    const Instance inst = helpers::small_generated(3000 + round, 4, 4, 2, 2, 1);
    const DistanceTable t = build_distance_table(inst);
    const ExactResult best = brute_force_optimal(inst);
    ++instances_checked;

    // Ranking and both searches can only sit at or above the optimum.
    const RankedStart start = rank_bases(inst, t);
    CHECK(best.objective_km <=
          objective_km(start.assignment, inst, t) + 1e-12);
    SearchConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(round);
    cfg.mode = SearchMode::Local;
    CHECK(best.objective_km <=
          objective_km(local_search(start, inst, t, cfg), inst, t) + 1e-12);
    cfg.mode = SearchMode::Tabu;
    CHECK(best.objective_km <=
          objective_km(tabu_search(start, inst, t, cfg), inst, t) + 1e-12);

    // And to any feasible assignment at all.
    int feasible = 0;
    while (feasible < 3) {
      const Assignment a = helpers::fuzz_assignment(inst, rng);
      if (!check_feasible(a, inst).empty()) continue;
      ++feasible;
      CHECK(best.objective_km <= objective_km(a, inst, t) + 1e-12);
    }
  }
  CHECK(instances_checked == 100);
}

TEST_CASE("lower bound never exceeds the exact optimum") {
  for (int round = 0; round < 8; ++round) {
    const Instance inst = helpers::small_generated(4000 + round, 5, 5, 3, 2, 1);
    const DistanceTable t = build_distance_table(inst);
    const ExactResult best = brute_force_optimal(inst);
    CHECK(objective_lower_bound_km(inst, t) <= best.objective_km + 1e-12);
  }
}

TEST_CASE("exported model has the counted variable set") {
  const Instance inst = helpers::tiny_instance();
  const DistanceTable t = build_distance_table(inst);
  const lp_eval::LinModel model =
      lp_eval::parse_lp(export_milp(inst, t, MilpFormat::Lp));

  // |R||M| + |F||M| + |F||A| + |R||A| + |R||H| + |M| * sum of compatible
  // bases per vehicle = 2 + 2 + 2 + 2 + 1 + 2*(3+2) = 19.
  CHECK(model.binaries.size() == 19);
  CHECK(model.binaries.contains("v_1_100"));
  CHECK(model.binaries.contains("w_2_101"));
  CHECK(model.binaries.contains("x_2_10"));
  CHECK(model.binaries.contains("y_1_11"));
  CHECK(model.binaries.contains("z_1_12"));
  CHECK(model.binaries.contains("s_1_12_100"));
  CHECK_FALSE(model.binaries.contains("x_2_12"));  // fixed wing on helipad
}

TEST_CASE("rotary-only missions pin fixed-wing serve variables to zero") {
  const Instance inst = helpers::tiny_instance();
  const DistanceTable t = build_distance_table(inst);
  const lp_eval::LinModel model =
      lp_eval::parse_lp(export_milp(inst, t, MilpFormat::Lp));

  bool found = false;
  for (const lp_eval::LinRow& row : model.rows) {
    if (row.name != "rotary_2_100") continue;
    found = true;
    REQUIRE(row.terms.size() == 1);
    CHECK(row.terms[0].var == "w_2_100");
    CHECK(row.sense == 'L');
    CHECK(row.rhs == 0.0);
  }
  CHECK(found);
}

static void check_export_soundness(MilpFormat format) {
  Rng rng(515151);
  for (int round = 0; round < 4; ++round) {
    const Instance inst = helpers::small_generated(6000 + round, 5, 5, 3, 2, 1);
    const DistanceTable t = build_distance_table(inst);
    const std::string text = export_milp(inst, t, format);
    const lp_eval::LinModel model = format == MilpFormat::Lp
                                        ? lp_eval::parse_lp(text)
                                        : lp_eval::parse_mps(text);
    REQUIRE_FALSE(model.binaries.empty());
    REQUIRE_FALSE(model.rows.empty());

    int feasible = 0;
    while (feasible < 8) {
      const Assignment a = helpers::fuzz_assignment(inst, rng);
      if (!check_feasible(a, inst).empty()) continue;
      ++feasible;
      const auto x = lp_eval::variable_values(inst, a, model);
      CHECK(lp_eval::first_broken_row(model, x) == "");
      CHECK(lp_eval::eval_objective(model, x) ==
            doctest::Approx(objective_km(a, inst, t)).epsilon(1e-6));
    }

    // Sanity on the evaluator itself: a broken assignment must fail rows.
    Assignment broken;
    for (const Vehicle& v : inst.fleet) broken.placement[v.id] = inst.bases[0].id;
    for (const Mission& m : inst.missions)
      broken.service[m.id] = inst.fleet[0].id;
    const auto x = lp_eval::variable_values(inst, broken, model);
    CHECK(lp_eval::first_broken_row(model, x) != "");
  }
}

TEST_CASE("LP export is sound for every feasible assignment") {
  check_export_soundness(MilpFormat::Lp);
}

TEST_CASE("MPS export is sound for every feasible assignment") {
  check_export_soundness(MilpFormat::Mps);
}

TEST_CASE("solution import rebuilds the optimum") {
  const Instance inst = helpers::tiny_instance();
  const ExactResult best = brute_force_optimal(inst);

  // Solution listing as a solver would emit it: every variable, value 0/1.
  std::ostringstream sol;
  sol << "# objective " << best.objective_km << "\n";
  sol << "v_1_100 1\nv_1_101 0\nw_2_100 0\nw_2_101 1\n";
  sol << "x_2_10 1\nx_2_11 0\n";
  sol << "y_1_10 0\ny_1_11 0\nz_1_12 1\n";
  sol << "s_1_12_100 1\ns_2_10_101 1\n";
  std::istringstream in(sol.str());
  const Assignment a = import_solution(in, inst);
  CHECK(a == best.assignment);
}

TEST_CASE("solution import error paths") {
  const Instance inst = helpers::tiny_instance();

  SUBCASE("all-zero solution leaves missions unserved") {
    std::istringstream in("v_1_100 0\nv_1_101 0\n");
    CHECK_THROWS_AS(import_solution(in, inst), InfeasibleReconstructionError);
  }
  SUBCASE("0.4999 is not binary") {
    std::istringstream in("v_1_100 0.4999\n");
    CHECK_THROWS_AS(import_solution(in, inst), NonBinaryValueError);
  }
  SUBCASE("1.0000004 rounds to binary within tolerance") {
    std::istringstream in(
        "v_1_100 1.0000004\nv_1_101 1\nz_1_12 0.9999997\nx_2_10 1\n"
        "w_2_101 0.0000002\n");
    CHECK_NOTHROW(import_solution(in, inst));
  }
  SUBCASE("unknown variable name") {
    std::istringstream in("q_1_100 1\n");
    CHECK_THROWS_AS(import_solution(in, inst), UnknownVariableError);
  }
  SUBCASE("unknown mission id inside a well-formed name") {
    std::istringstream in("v_1_999 1\n");
    CHECK_THROWS_AS(import_solution(in, inst), UnknownVariableError);
  }
  SUBCASE("double placement") {
    std::istringstream in(
        "v_1_100 1\nv_1_101 1\nz_1_12 1\ny_1_10 1\nx_2_11 1\n");
    CHECK_THROWS_AS(import_solution(in, inst), InfeasibleReconstructionError);
  }
}
