#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "scmpc/controller.hpp"
#include "scmpc/model.hpp"

namespace scmpc {

inline constexpr std::uint64_t kDefaultPlantSeed = 67890;

struct ClosedLoopStats {
  std::vector<double> violation_avg;  // V_avg per constraint
  double cost_avg = 0.0;
  double cost_std = 0.0;  // population standard deviation of stage costs
  long soft_activations = 0;
};

struct ClosedLoopRecord {
  std::vector<Eigen::VectorXd> states;  // x_0 .. x_T (one more than steps)
  std::vector<Eigen::VectorXd> inputs;
  std::vector<UncertaintySample> disturbances;
  std::vector<std::vector<std::uint8_t>> violations;  // [t][j]: x_{t+1} outside X_j
  // Realized cost of the transition taken at step t: l(x_{t+1}, u_t), the
  // reached state paired with the input that produced it. The pairing does
  // not move the long-run mean but it is what the dispersion of the stage
  // costs is measured on.
  std::vector<double> stage_costs;
  std::vector<SolveStatus> statuses;
  ClosedLoopStats stats;
  bool truncated = false;  // hard infeasibility cut the run short
  long failure_step = -1;
};

// Closed-loop Monte Carlo: evolve the true system under the SCMPC law for T
// steps. Plant disturbances come from plant_seed and are independent of the
// controller's scenario streams; violations are judged on the realized next
// state. With soft constraints disabled a controller infeasibility
// truncates the record at the failing step.
ClosedLoopRecord simulate(const SystemModel& model, const ControllerConfig& config,
                          const Eigen::VectorXd& x0, long T, std::uint64_t plant_seed);

// Monte Carlo estimate of P[A(d) x + B(d) u + w(d) outside X] over M fresh
// draws.
double estimate_violation_probability(const SystemModel& model, const Eigen::VectorXd& x_t,
                                      const Eigen::VectorXd& u, const Polytope& X, long M,
                                      const RngStream& stream);

// One-dimensional additive test problem with analytically known support
// rank 1: the first-step violation probability of its scenario solution can
// be evaluated exactly through the noise distribution's CDF.
struct ToyProblem {
  SystemModel model;
  Polytope state_set;
  Polytope input_set;
  StageCost cost;
  int horizon;
  Eigen::VectorXd x0;
};

// x+ = x + u + w, w ~ N(0, 0.01), X = {x >= 1}, input cost only, N = 1.
ToyProblem make_default_toy();

struct BoundValidation {
  double empirical_mean;  // mean exact first-step violation over the draws
  double std_error;       // sample standard error of that mean
  double bound;           // expected_violation_bound(K, R, rho1)
  long draws;
};

// Validates the expected-violation bound empirically: draws independent
// scenario sets, solves the program (with removal when R > 0), and averages
// the exact first-step violation probability of each solution.
BoundValidation bound_validation_experiment(const ToyProblem& toy, long K, long R, int rho1,
                                            long draws, std::uint64_t seed,
                                            RemovalAlgorithm algorithm = RemovalAlgorithm::greedy);

}  // namespace scmpc
