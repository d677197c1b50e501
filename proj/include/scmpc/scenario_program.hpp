#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "scmpc/model.hpp"
#include "scmpc/polytope.hpp"

namespace scmpc {

// Condensed scenario predictions over the stacked input vector
// u = (u_0, ..., u_{N-1}):
//   x_i^(k) = gain[k][i-1] * u + offset[k][i-1],   i = 1..N.
// Built by forward recursion, so gain columns beyond stage i*m are zero.
struct CondensedTrajectory {
  std::vector<std::vector<Eigen::MatrixXd>> gain;    // [k][i-1]: n x (N*m)
  std::vector<std::vector<Eigen::VectorXd>> offset;  // [k][i-1]: n
  int horizon = 0;
  Eigen::Index state_dim = 0;
  Eigen::Index input_dim = 0;

  [[nodiscard]] Eigen::VectorXd predict(int scenario, int stage,
                                        const Eigen::VectorXd& u_stack) const;
};

CondensedTrajectory condense(const Eigen::VectorXd& x_t, const std::vector<Scenario>& scenarios);

enum class RowKind { state, input };

// Origin of an inequality row: state rows carry (constraint j, scenario k,
// stage i in 1..N); input rows carry the stage only.
struct RowTag {
  RowKind kind;
  int constraint;  // -1 for input rows
  int scenario;    // -1 for input rows
  int stage;
};

// A state constraint imposed on the first scenario_count scenarios of the
// drawn pool; counts may differ between constraints.
struct StateConstraint {
  Polytope set;
  int scenario_count;
};

// Condensed convex QP over the stacked input vector:
//   minimize   1/2 u'Hu + g'u + c0
//   subject to A u <= b,
// where the objective equals the scenario-averaged stage cost
// (1/K) sum_k sum_i l(x_i^(k), u_i). The 1/K normalization leaves the
// minimizer of the plain scenario sum unchanged and keeps conditioning flat
// across sample sizes. State rows are grouped contiguously per scenario;
// input rows follow at the end and are never removable.
struct ScenarioProgram {
  int horizon = 0;
  Eigen::Index state_dim = 0;
  Eigen::Index input_dim = 0;
  int scenario_count = 0;

  Eigen::MatrixXd hessian;
  Eigen::VectorXd gradient;
  double objective_constant = 0.0;
  Eigen::MatrixXd input_stage_quad;  // R'R, for first-stage-cost metrics

  Eigen::MatrixXd inequality_A;
  Eigen::VectorXd inequality_b;
  std::vector<RowTag> row_tags;
  Eigen::Index state_row_count = 0;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> scenario_row_span;  // [k]: [begin, end)

  double slack_penalty = 0.0;  // 0 disables the soft fallback

  [[nodiscard]] int constraint_count() const { return num_constraints; }
  // State rows of one scenario, optionally restricted to one constraint.
  [[nodiscard]] std::vector<Eigen::Index> rows_of(int scenario, int constraint = -1) const;
  [[nodiscard]] double objective_value(const Eigen::VectorXd& u_stack) const;

  int num_constraints = 0;
};

ScenarioProgram assemble(const Eigen::VectorXd& x_t, const std::vector<Scenario>& scenarios,
                         const StageCost& cost,
                         const std::vector<StateConstraint>& state_constraints,
                         const Polytope& input_set, double slack_penalty);

enum class SolveStatus { optimal, infeasible, soft_active };

struct QPSolution {
  Eigen::VectorXd u_stack;
  double objective = 0.0;  // 1/2 u'Hu + g'u + c0 at u_stack
  Eigen::VectorXd dual;    // per inequality row, zero where inactive or masked
  SolveStatus status = SolveStatus::optimal;
  double slack_l1 = 0.0;   // total state-row relaxation when soft_active
};

// Solves the program (optionally with rows masked out). When the hard
// program is infeasible and slack_penalty > 0, re-solves with nonnegative
// slacks on the state rows under an exact L1 penalty and reports
// soft_active; with slack_penalty == 0 it throws InfeasibleError. KKT
// residuals of optimal solutions are verified to 1e-6.
QPSolution solve(const ScenarioProgram& program);
QPSolution solve(const ScenarioProgram& program, const std::vector<std::uint8_t>& row_enabled);

}  // namespace scmpc
