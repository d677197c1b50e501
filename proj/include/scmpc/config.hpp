#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "scmpc/controller.hpp"
#include "scmpc/simulator.hpp"

namespace scmpc {

// A fully resolved closed-loop experiment: system, controller configuration
// (per-constraint sample sizes filled in from the complexity bounds when
// omitted), initial state, step count, and seeds.
struct ExperimentConfig {
  SystemModel model;
  ControllerConfig controller;
  Eigen::VectorXd x0;
  long steps;
  std::uint64_t plant_seed;
  std::string output_dir;
};

// Parses and validates the JSON experiment schema. Unknown keys and
// inconsistent dimensions are rejected with ConfigError. Omitted per-
// constraint fields are resolved: rho1 from the support-rank bound,
// samples from min_sample_size.
ExperimentConfig load_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config_file(const std::string& path);

struct ExperimentResult {
  ClosedLoopRecord record;
  double wall_seconds;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// trajectory.csv: t, state components, input components, one violation flag
// per constraint, stage cost, solver status. One row per executed step.
void write_trajectory_csv(std::ostream& out, const ExperimentConfig& config,
                          const ClosedLoopRecord& record);

// stats.json payload; deterministic except for wall_time_seconds.
nlohmann::json stats_json(const ExperimentConfig& config, const ClosedLoopRecord& record,
                          double wall_seconds);

const char* to_string(RemovalAlgorithm algorithm);
const char* to_string(SolveStatus status);

}  // namespace scmpc
