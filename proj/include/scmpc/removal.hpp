#pragma once

#include <cstdint>
#include <vector>

#include "scmpc/scenario_program.hpp"

namespace scmpc {

enum class RemovalAlgorithm { optimal, greedy, marginal };

// Improvement metric for greedy removal: total objective or the first
// stage cost only.
enum class GreedyMetric { total_cost, first_stage_cost };

struct RemovalOutcome {
  std::vector<int> kept;     // scenario indices, ascending
  std::vector<int> removed;  // in removal order (ascending for optimal)
  // FHSCP instances evaluated, counted as in the removal algorithm's
  // definition: C(K,R) for optimal, K*R - R*(R-1)/2 tentative solves for
  // greedy (R >= 1), R+1 for marginal; a single solve when R = 0. A
  // tentative instance whose removed scenario has only inactive rows is
  // resolved from the incumbent solution, which solves it exactly.
  long solve_count = 0;
  QPSolution final;
};

// Scenario removal is all-or-nothing per scenario: removing k disables all
// of k's state rows at once. Outcomes are deterministic; ties are broken
// toward the smallest scenario index (optimal removal: lexicographically
// smallest removed set).
RemovalOutcome remove_optimal(const ScenarioProgram& program, int R);
RemovalOutcome remove_greedy(const ScenarioProgram& program, int R,
                             GreedyMetric metric = GreedyMetric::total_cost);
RemovalOutcome remove_marginal(const ScenarioProgram& program, int R);

// Per-constraint form used with multiple chance constraints: removes R of
// the scenarios covered by constraint_id (or any constraint when -1),
// toggling only that constraint's rows. row_mask is shared across calls so
// that per-constraint removal budgets compose; it must start all-enabled
// for a fresh program.
RemovalOutcome remove_scenarios(const ScenarioProgram& program, RemovalAlgorithm algorithm,
                                int R, int constraint_id, std::vector<std::uint8_t>& row_mask,
                                GreedyMetric metric = GreedyMetric::total_cost);

}  // namespace scmpc
