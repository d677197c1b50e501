#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "scmpc/complexity.hpp"
#include "scmpc/model.hpp"
#include "scmpc/removal.hpp"
#include "scmpc/rng.hpp"

namespace scmpc {

inline constexpr std::uint64_t kDefaultControllerSeed = 12345;

// One chance constraint with its sample-removal pair.
struct ConstraintConfig {
  ChanceConstraintSpec chance;
  long samples;   // K_j scenarios the constraint binds on
  long removals;  // R_j of them removable a posteriori
};

struct ControllerConfig {
  int horizon;
  std::vector<ConstraintConfig> constraints;
  Polytope input_set;
  StageCost cost;
  RemovalAlgorithm removal_algorithm = RemovalAlgorithm::greedy;
  GreedyMetric greedy_metric = GreedyMetric::total_cost;
  // Weight of the soft-constraint fallback; < 0 selects the default
  // 1e6 * (largest cost eigenvalue), 0 disables soft constraints (hard
  // infeasibility becomes an error).
  double slack_penalty = -1.0;
  std::uint64_t seed = kDefaultControllerSeed;
  // Accept inadmissible (K, R) pairs instead of refusing at construction.
  bool force_inadmissible = false;
};

struct AdmissibilityReport {
  int constraint;
  bool admissible;
  double bound;
};

// Expected-violation bound of each constraint's (K_j, R_j) against its
// epsilon_j.
std::vector<AdmissibilityReport> admissibility_check(const ControllerConfig& config);

struct StepDiagnostics {
  double objective = 0.0;
  SolveStatus status = SolveStatus::optimal;
  double slack_l1 = 0.0;
  std::vector<std::vector<int>> removed;  // per constraint
  long qp_instances = 0;
  double solve_seconds = 0.0;
};

// Receding-horizon scenario MPC feedback law: at each step, draw fresh
// scenarios, run per-constraint removal, solve the scenario program, and
// apply the first input. Scenario draws at time t come from substream t of
// the configured seed, so distinct steps use disjoint streams and a
// trajectory replays bit-identically from the same seed.
class Controller {
 public:
  Controller(SystemModel model, ControllerConfig config);

  std::pair<Eigen::VectorXd, StepDiagnostics> step(const Eigen::VectorXd& x_t, long t);

  [[nodiscard]] int pool_size() const { return pool_; }
  [[nodiscard]] double resolved_slack_penalty() const { return slack_penalty_; }
  [[nodiscard]] const ControllerConfig& config() const { return config_; }
  [[nodiscard]] const SystemModel& model() const { return model_; }

 private:
  SystemModel model_;
  ControllerConfig config_;
  RngStream scenario_root_;
  int pool_;
  double slack_penalty_;
};

}  // namespace scmpc
