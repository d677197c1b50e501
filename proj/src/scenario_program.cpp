#include "scmpc/scenario_program.hpp"

#include <cmath>
#include <string>

#include "scmpc/errors.hpp"
#include "scmpc/log.hpp"
#include "scmpc/qp.hpp"

namespace scmpc {

Eigen::VectorXd CondensedTrajectory::predict(int scenario, int stage,
                                             const Eigen::VectorXd& u_stack) const {
  if (scenario < 0 || scenario >= static_cast<int>(gain.size()) || stage < 1 ||
      stage > horizon) {
    throw UsageError("condensed trajectory: scenario/stage out of range");
  }
  const auto k = static_cast<std::size_t>(scenario);
  const auto s = static_cast<std::size_t>(stage - 1);
  return gain[k][s] * u_stack + offset[k][s];
}

CondensedTrajectory condense(const Eigen::VectorXd& x_t, const std::vector<Scenario>& scenarios) {
  if (scenarios.empty()) throw UsageError("condense: need at least one scenario");
  const int N = static_cast<int>(scenarios.front().size());
  if (N < 1) throw UsageError("condense: scenarios must have at least one stage");
  const Eigen::Index n = x_t.size();
  const Eigen::Index m = scenarios.front().front().B.cols();

  CondensedTrajectory out;
  out.horizon = N;
  out.state_dim = n;
  out.input_dim = m;
  out.gain.resize(scenarios.size());
  out.offset.resize(scenarios.size());

  for (std::size_t k = 0; k < scenarios.size(); ++k) {
    const Scenario& scenario = scenarios[k];
    if (static_cast<int>(scenario.size()) != N) {
      throw UsageError("condense: scenarios must all have the same horizon");
    }
    out.gain[k].reserve(static_cast<std::size_t>(N));
    out.offset[k].reserve(static_cast<std::size_t>(N));

    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(N) * m);
    Eigen::VectorXd d = x_t;
    for (int i = 0; i < N; ++i) {
      const SystemRealization& r = scenario[static_cast<std::size_t>(i)];
      if (r.A.rows() != n || r.A.cols() != n || r.B.rows() != n || r.B.cols() != m ||
          r.w.size() != n) {
        throw UsageError("condense: realization dimensions inconsistent with x_t");
      }
      G = r.A * G;
      G.block(0, static_cast<Eigen::Index>(i) * m, n, m) += r.B;
      d = r.A * d + r.w;
      out.gain[k].push_back(G);
      out.offset[k].push_back(d);
    }
  }
  return out;
}

std::vector<Eigen::Index> ScenarioProgram::rows_of(int scenario, int constraint) const {
  if (scenario < 0 || scenario >= scenario_count) {
    throw UsageError("scenario program: scenario index out of range");
  }
  std::vector<Eigen::Index> rows;
  const auto [begin, end] = scenario_row_span[static_cast<std::size_t>(scenario)];
  for (Eigen::Index r = begin; r < end; ++r) {
    const RowTag& tag = row_tags[static_cast<std::size_t>(r)];
    if (constraint < 0 || tag.constraint == constraint) rows.push_back(r);
  }
  return rows;
}

double ScenarioProgram::objective_value(const Eigen::VectorXd& u_stack) const {
  return 0.5 * u_stack.dot(hessian * u_stack) + gradient.dot(u_stack) + objective_constant;
}

ScenarioProgram assemble(const Eigen::VectorXd& x_t, const std::vector<Scenario>& scenarios,
                         const StageCost& cost,
                         const std::vector<StateConstraint>& state_constraints,
                         const Polytope& input_set, double slack_penalty) {
  const CondensedTrajectory pred = condense(x_t, scenarios);
  const int K = static_cast<int>(scenarios.size());
  const int N = pred.horizon;
  const Eigen::Index n = pred.state_dim;
  const Eigen::Index m = pred.input_dim;
  const Eigen::Index dim = static_cast<Eigen::Index>(N) * m;

  if (cost.state_weight().cols() != n || cost.input_weight().cols() != m) {
    throw UsageError("assemble: cost weight dimensions do not match the system");
  }
  if (input_set.dim() != m) throw UsageError("assemble: input set dimension != m");
  for (const auto& sc : state_constraints) {
    if (sc.set.dim() != n) throw UsageError("assemble: state constraint dimension != n");
    if (sc.scenario_count < 0 || sc.scenario_count > K) {
      throw UsageError("assemble: constraint scenario count must lie in [0, K]");
    }
  }
  if (slack_penalty < 0.0) throw UsageError("assemble: slack penalty must be >= 0");

  ScenarioProgram p;
  p.horizon = N;
  p.state_dim = n;
  p.input_dim = m;
  p.scenario_count = K;
  p.num_constraints = static_cast<int>(state_constraints.size());
  p.slack_penalty = slack_penalty;
  p.input_stage_quad = cost.input_quad();

  // Objective: (1/K) sum_k sum_{i=0}^{N-1} l(x_i^(k), u_i). The x_0 term and
  // the offset quadratics are constant in u and land in objective_constant.
  const Eigen::MatrixXd& Qq = cost.state_quad();
  const Eigen::MatrixXd& Rq = cost.input_quad();
  p.hessian = Eigen::MatrixXd::Zero(dim, dim);
  p.gradient = Eigen::VectorXd::Zero(dim);
  p.objective_constant = x_t.dot(Qq * x_t);
  for (int i = 0; i < N; ++i) {
    p.hessian.block(static_cast<Eigen::Index>(i) * m, static_cast<Eigen::Index>(i) * m, m, m) +=
        2.0 * Rq;
  }
  const double inv_k = 1.0 / static_cast<double>(K);
  for (int k = 0; k < K; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    for (int i = 1; i <= N - 1; ++i) {
      const Eigen::MatrixXd& G = pred.gain[ku][static_cast<std::size_t>(i - 1)];
      const Eigen::VectorXd& d = pred.offset[ku][static_cast<std::size_t>(i - 1)];
      const Eigen::MatrixXd QqG = Qq * G;
      p.hessian.noalias() += 2.0 * inv_k * G.transpose() * QqG;
      p.gradient.noalias() += 2.0 * inv_k * G.transpose() * (Qq * d);
      p.objective_constant += inv_k * d.dot(Qq * d);
    }
  }

  // State rows grouped per scenario, then input rows. Stage range is
  // i = 1..N: every predicted successor of an applied input is constrained.
  Eigen::Index state_rows = 0;
  for (const auto& sc : state_constraints) {
    state_rows += sc.set.num_rows() * sc.scenario_count * N;
  }
  const Eigen::Index input_rows = input_set.num_rows() * N;
  p.inequality_A = Eigen::MatrixXd::Zero(state_rows + input_rows, dim);
  p.inequality_b = Eigen::VectorXd::Zero(state_rows + input_rows);
  p.row_tags.reserve(static_cast<std::size_t>(state_rows + input_rows));
  p.state_row_count = state_rows;
  p.scenario_row_span.resize(static_cast<std::size_t>(K));

  Eigen::Index row = 0;
  for (int k = 0; k < K; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const Eigen::Index span_begin = row;
    for (int j = 0; j < static_cast<int>(state_constraints.size()); ++j) {
      const auto& sc = state_constraints[static_cast<std::size_t>(j)];
      if (k >= sc.scenario_count) continue;
      const Eigen::Index q = sc.set.num_rows();
      for (int i = 1; i <= N; ++i) {
        const Eigen::MatrixXd& G = pred.gain[ku][static_cast<std::size_t>(i - 1)];
        const Eigen::VectorXd& d = pred.offset[ku][static_cast<std::size_t>(i - 1)];
        p.inequality_A.block(row, 0, q, dim) = sc.set.normals() * G;
        p.inequality_b.segment(row, q) = sc.set.offsets() - sc.set.normals() * d;
        for (Eigen::Index l = 0; l < q; ++l) {
          p.row_tags.push_back({RowKind::state, j, k, i});
        }
        row += q;
      }
    }
    p.scenario_row_span[ku] = {span_begin, row};
  }
  for (int i = 0; i < N; ++i) {
    const Eigen::Index q = input_set.num_rows();
    p.inequality_A.block(row, static_cast<Eigen::Index>(i) * m, q, m) = input_set.normals();
    p.inequality_b.segment(row, q) = input_set.offsets();
    for (Eigen::Index l = 0; l < q; ++l) {
      p.row_tags.push_back({RowKind::input, -1, -1, i});
    }
    row += q;
  }
  return p;
}

namespace {

void verify_kkt(const ScenarioProgram& p, const QpResult& qp,
                const std::vector<std::uint8_t>* mask) {
  const Eigen::VectorXd stat =
      p.hessian * qp.x + p.gradient + p.inequality_A.transpose() * qp.dual;
  const double stat_scale =
      1.0 + p.gradient.cwiseAbs().maxCoeff() + (p.hessian * qp.x).cwiseAbs().maxCoeff();
  if (stat.cwiseAbs().maxCoeff() > 1e-6 * stat_scale) {
    throw NumericalError("solve: stationarity residual exceeds 1e-6");
  }
  const Eigen::VectorXd slack = p.inequality_A * qp.x - p.inequality_b;
  for (Eigen::Index r = 0; r < slack.size(); ++r) {
    if (mask && !(*mask)[static_cast<std::size_t>(r)]) continue;
    if (slack[r] > 1e-6 * (1.0 + std::abs(p.inequality_b[r]))) {
      throw NumericalError("solve: primal feasibility residual exceeds 1e-6 on row " +
                           std::to_string(r));
    }
    if (qp.dual[r] < 0.0) throw NumericalError("solve: negative multiplier");
    if (std::abs(qp.dual[r] * slack[r]) > 1e-6 * (1.0 + std::abs(qp.objective))) {
      throw NumericalError("solve: complementarity residual exceeds 1e-6 on row " +
                           std::to_string(r));
    }
  }
}

// Exact L1 penalty on the state rows: minimize the original objective plus
// slack_penalty * sum of state-row violations, input rows hard. Solved by
// iterating on the violated set: penalized rows contribute a linear term,
// the rest stay hard. Rows leave the penalized set when they come back
// strictly satisfied and enter it when their hard multiplier exceeds the
// penalty.
QPSolution solve_soft(const ScenarioProgram& p, const std::vector<std::uint8_t>& enabled) {
  const Eigen::Index rows = p.inequality_A.rows();
  const double pi = p.slack_penalty;

  std::vector<std::uint8_t> penalized(static_cast<std::size_t>(rows), 0);
  for (Eigen::Index r = 0; r < p.state_row_count; ++r) {
    penalized[static_cast<std::size_t>(r)] = enabled[static_cast<std::size_t>(r)];
  }

  const long max_rounds = 4 * static_cast<long>(p.state_row_count) + 20;
  QpResult qp;
  std::vector<std::uint8_t> hard(static_cast<std::size_t>(rows));
  for (long round = 0; round < max_rounds; ++round) {
    Eigen::VectorXd grad = p.gradient;
    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto ru = static_cast<std::size_t>(r);
      hard[ru] = enabled[ru] && !penalized[ru];
      if (penalized[ru]) grad += pi * p.inequality_A.row(r).transpose();
    }
    qp = solve_qp(p.hessian, grad, p.inequality_A, p.inequality_b, &hard);
    if (qp.status != QpStatus::optimal) {
      throw InfeasibleError("scenario program: input constraints alone are infeasible");
    }

    bool changed = false;
    const Eigen::VectorXd slack = p.inequality_A * qp.x - p.inequality_b;
    for (Eigen::Index r = 0; r < p.state_row_count; ++r) {
      const auto ru = static_cast<std::size_t>(r);
      if (!enabled[ru]) continue;
      const double tol = 1e-10 * (1.0 + std::abs(p.inequality_b[r]));
      if (penalized[ru] && slack[r] < -tol) {
        penalized[ru] = 0;  // satisfied strictly: back to hard
        changed = true;
      } else if (!penalized[ru] && qp.dual[r] > pi * (1.0 + 1e-9)) {
        penalized[ru] = 1;  // cheaper to violate than to enforce
        changed = true;
      }
    }
    if (!changed) break;
    if (round + 1 == max_rounds) {
      throw NumericalError("solve: soft-constraint iteration failed to settle");
    }
  }

  QPSolution sol;
  sol.u_stack = qp.x;
  sol.objective = p.objective_value(qp.x);
  sol.status = SolveStatus::soft_active;
  sol.dual = qp.dual;
  const Eigen::VectorXd slack = p.inequality_A * qp.x - p.inequality_b;
  for (Eigen::Index r = 0; r < p.state_row_count; ++r) {
    const auto ru = static_cast<std::size_t>(r);
    if (!penalized[ru]) continue;
    sol.dual[r] = pi;
    sol.slack_l1 += std::max(0.0, slack[r]);
  }
  log::info("soft constraints active: total slack " + std::to_string(sol.slack_l1));
  return sol;
}

}  // namespace

QPSolution solve(const ScenarioProgram& program) {
  const std::vector<std::uint8_t> all(program.row_tags.size(), 1);
  return solve(program, all);
}

QPSolution solve(const ScenarioProgram& program, const std::vector<std::uint8_t>& row_enabled) {
  if (row_enabled.size() != program.row_tags.size()) {
    throw UsageError("solve: row mask size does not match the program");
  }
  const QpResult qp = solve_qp(program.hessian, program.gradient, program.inequality_A,
                               program.inequality_b, &row_enabled);
  if (qp.status == QpStatus::optimal) {
    verify_kkt(program, qp, &row_enabled);
    QPSolution sol;
    sol.u_stack = qp.x;
    sol.objective = program.objective_value(qp.x);
    sol.dual = qp.dual;
    sol.status = SolveStatus::optimal;
    return sol;
  }
  if (program.slack_penalty == 0.0) {
    throw InfeasibleError("scenario program infeasible and soft constraints are disabled");
  }
  return solve_soft(program, row_enabled);
}

}  // namespace scmpc
