#include "scmpc/controller.hpp"

#include <chrono>
#include <string>

#include "scmpc/errors.hpp"
#include "scmpc/scenario_program.hpp"

namespace scmpc {

std::vector<AdmissibilityReport> admissibility_check(const ControllerConfig& config) {
  std::vector<AdmissibilityReport> reports;
  reports.reserve(config.constraints.size());
  for (int j = 0; j < static_cast<int>(config.constraints.size()); ++j) {
    const auto& c = config.constraints[static_cast<std::size_t>(j)];
    const SampleRemovalPair pair =
        evaluate_pair(c.samples, c.removals, c.chance.rho1_bound, c.chance.epsilon);
    reports.push_back({j, pair.admissible(), pair.expected_violation});
  }
  return reports;
}

Controller::Controller(SystemModel model, ControllerConfig config)
    : model_(std::move(model)),
      config_(std::move(config)),
      scenario_root_(config_.seed),
      pool_(1) {
  const Eigen::Index n = model_.state_dim();
  const Eigen::Index m = model_.input_dim();
  if (config_.horizon < 1) throw ConfigError("controller: horizon must be >= 1");
  if (config_.input_set.dim() != m) {
    throw ConfigError("controller: input set dimension does not match the model");
  }
  if (config_.cost.state_weight().cols() != n || config_.cost.input_weight().cols() != m) {
    throw ConfigError("controller: cost weight dimensions do not match the model");
  }

  const long rho1_cap = std::min<long>(n, static_cast<long>(config_.horizon) * m);
  for (int j = 0; j < static_cast<int>(config_.constraints.size()); ++j) {
    const auto& c = config_.constraints[static_cast<std::size_t>(j)];
    if (c.chance.set.dim() != n) {
      throw ConfigError("controller: constraint " + std::to_string(j) +
                        " dimension does not match the state");
    }
    if (c.chance.rho1_bound > rho1_cap) {
      throw ConfigError("controller: constraint " + std::to_string(j) + " support-rank bound " +
                        std::to_string(c.chance.rho1_bound) + " exceeds min(n, N*m) = " +
                        std::to_string(rho1_cap));
    }
    if (c.samples < c.chance.rho1_bound + c.removals) {
      throw ConfigError("controller: constraint " + std::to_string(j) +
                        " needs K >= rho1 + R, got K=" + std::to_string(c.samples) +
                        " rho1=" + std::to_string(c.chance.rho1_bound) +
                        " R=" + std::to_string(c.removals));
    }
    pool_ = std::max(pool_, static_cast<int>(c.samples));
  }

  if (!config_.force_inadmissible) {
    for (const auto& report : admissibility_check(config_)) {
      if (!report.admissible) {
        const auto& c = config_.constraints[static_cast<std::size_t>(report.constraint)];
        throw ConfigError("controller: constraint " + std::to_string(report.constraint) +
                          " sample-removal pair (K=" + std::to_string(c.samples) +
                          ", R=" + std::to_string(c.removals) + ") is inadmissible: bound " +
                          std::to_string(report.bound) + " > epsilon " +
                          std::to_string(c.chance.epsilon));
      }
    }
  }

  slack_penalty_ = config_.slack_penalty >= 0.0
                       ? config_.slack_penalty
                       : 1e6 * std::max(1.0, config_.cost.max_eigenvalue());
}

std::pair<Eigen::VectorXd, StepDiagnostics> Controller::step(const Eigen::VectorXd& x_t,
                                                             long t) {
  if (x_t.size() != model_.state_dim()) {
    throw UsageError("controller step: state dimension does not match the model");
  }
  const auto started = std::chrono::steady_clock::now();

  const std::vector<Scenario> scenarios =
      sample_scenarios(model_, pool_, config_.horizon,
                       scenario_root_.substream(static_cast<std::uint64_t>(t)));

  std::vector<StateConstraint> state_constraints;
  state_constraints.reserve(config_.constraints.size());
  for (const auto& c : config_.constraints) {
    state_constraints.push_back({c.chance.set, static_cast<int>(c.samples)});
  }

  StepDiagnostics diag;
  diag.removed.resize(config_.constraints.size());
  try {
    const ScenarioProgram program = assemble(x_t, scenarios, config_.cost, state_constraints,
                                             config_.input_set, slack_penalty_);
    std::vector<std::uint8_t> mask(program.row_tags.size(), 1);

    QPSolution sol;
    bool solved = false;
    for (int j = 0; j < static_cast<int>(config_.constraints.size()); ++j) {
      const auto& c = config_.constraints[static_cast<std::size_t>(j)];
      if (c.removals == 0) continue;
      RemovalOutcome outcome =
          remove_scenarios(program, config_.removal_algorithm, static_cast<int>(c.removals), j,
                           mask, config_.greedy_metric);
      diag.removed[static_cast<std::size_t>(j)] = outcome.removed;
      diag.qp_instances += outcome.solve_count;
      sol = std::move(outcome.final);
      solved = true;
    }
    if (!solved) {
      sol = solve(program, mask);
      diag.qp_instances = 1;
    }

    const Eigen::VectorXd u = sol.u_stack.head(model_.input_dim());
    if (!config_.input_set.contains(u, 1e-6)) {
      throw NumericalError("controller step: first input violates the input set");
    }

    diag.objective = sol.objective;
    diag.status = sol.status;
    diag.slack_l1 = sol.slack_l1;
    diag.solve_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return {u, diag};
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(std::string(e.what()) + " (time step " + std::to_string(t) + ")", t);
  }
}

}  // namespace scmpc
