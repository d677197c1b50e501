#include "scmpc/simulator.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "scmpc/complexity.hpp"
#include "scmpc/errors.hpp"
#include "scmpc/log.hpp"
#include "scmpc/scenario_program.hpp"

namespace scmpc {

ClosedLoopRecord simulate(const SystemModel& model, const ControllerConfig& config,
                          const Eigen::VectorXd& x0, long T, std::uint64_t plant_seed) {
  if (T < 1) throw UsageError("simulate: need T >= 1");
  Controller controller(model, config);
  const RngStream plant_root(plant_seed);
  const auto num_constraints = config.constraints.size();

  ClosedLoopRecord rec;
  rec.states.reserve(static_cast<std::size_t>(T) + 1);
  rec.inputs.reserve(static_cast<std::size_t>(T));
  rec.stage_costs.reserve(static_cast<std::size_t>(T));
  rec.states.push_back(x0);

  Eigen::VectorXd x = x0;
  for (long t = 0; t < T; ++t) {
    Eigen::VectorXd u;
    StepDiagnostics diag;
    try {
      std::tie(u, diag) = controller.step(x, t);
    } catch (const InfeasibleError& e) {
      log::info(std::string("simulation truncated: ") + e.what());
      rec.truncated = true;
      rec.failure_step = t;
      break;
    }

    RngCursor plant(plant_root.substream(static_cast<std::uint64_t>(t)));
    const UncertaintySample delta = model.draw(plant);
    const SystemRealization real = model.realize(delta);
    const Eigen::VectorXd x_next = real.A * x + real.B * u + real.w;

    std::vector<std::uint8_t> viol(num_constraints, 0);
    for (std::size_t j = 0; j < num_constraints; ++j) {
      viol[j] = config.constraints[j].chance.set.contains(x_next) ? 0 : 1;
    }

    rec.inputs.push_back(u);
    rec.disturbances.push_back(delta);
    rec.violations.push_back(std::move(viol));
    rec.stage_costs.push_back(config.cost.value(x_next, u));
    rec.statuses.push_back(diag.status);
    if (diag.status == SolveStatus::soft_active) ++rec.stats.soft_activations;

    x = x_next;
    rec.states.push_back(x);
  }

  const auto steps = static_cast<long>(rec.inputs.size());
  rec.stats.violation_avg.assign(num_constraints, 0.0);
  if (steps > 0) {
    for (std::size_t j = 0; j < num_constraints; ++j) {
      long count = 0;
      for (long t = 0; t < steps; ++t) {
        count += rec.violations[static_cast<std::size_t>(t)][j];
      }
      rec.stats.violation_avg[j] = static_cast<double>(count) / static_cast<double>(steps);
    }
    double mean = 0.0;
    for (const double c : rec.stage_costs) mean += c;
    mean /= static_cast<double>(steps);
    double var = 0.0;
    for (const double c : rec.stage_costs) var += (c - mean) * (c - mean);
    var /= static_cast<double>(steps);
    rec.stats.cost_avg = mean;
    rec.stats.cost_std = std::sqrt(var);
  }
  return rec;
}

double estimate_violation_probability(const SystemModel& model, const Eigen::VectorXd& x_t,
                                      const Eigen::VectorXd& u, const Polytope& X, long M,
                                      const RngStream& stream) {
  if (M < 1) throw UsageError("estimate_violation_probability: need M >= 1");
  if (x_t.size() != model.state_dim() || u.size() != model.input_dim()) {
    throw UsageError("estimate_violation_probability: state/input dimensions do not match");
  }
  long violations = 0;
  for (long i = 0; i < M; ++i) {
    RngCursor cursor(stream.substream(static_cast<std::uint64_t>(i)));
    const SystemRealization real = model.sample_realization(cursor);
    const Eigen::VectorXd x_next = real.A * x_t + real.B * u + real.w;
    if (!X.contains(x_next)) ++violations;
  }
  return static_cast<double>(violations) / static_cast<double>(M);
}

ToyProblem make_default_toy() {
  Eigen::MatrixXd one(1, 1);
  one << 1.0;
  SystemModel model(one, {}, one, {}, {}, {ScalarDist::normal(0.0, 0.01)});
  Eigen::MatrixXd Hx(1, 1);
  Hx << -1.0;
  Eigen::VectorXd hx(1);
  hx << -1.0;  // x >= 1
  Eigen::VectorXd lo(1), hi(1);
  lo << -1e3;
  hi << 1e3;
  return ToyProblem{std::move(model), Polytope(Hx, hx), Polytope::box(lo, hi),
                    StageCost(Eigen::MatrixXd::Zero(1, 1), one), 1,
                    Eigen::VectorXd::Zero(1)};
}

namespace {

// Exact P[x1 outside X] for a scalar additive system: x1 = c + w with the
// feasible set an interval in x1.
double exact_scalar_violation(const ScalarDist& noise, double c, const Polytope& X) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (Eigen::Index r = 0; r < X.num_rows(); ++r) {
    const double a = X.normals()(r, 0);
    const double b = X.offsets()(r);
    if (a > 0.0) {
      hi = std::min(hi, b / a);
    } else if (a < 0.0) {
      lo = std::max(lo, b / a);
    } else if (b < 0.0) {
      return 1.0;  // 0 <= b violated identically
    }
  }
  if (lo > hi) return 1.0;
  if (noise.degenerate()) {
    const double w = noise.mean();
    return (c + w >= lo && c + w <= hi) ? 0.0 : 1.0;
  }
  const double p_hi = std::isfinite(hi) ? noise.cdf(hi - c) : 1.0;
  const double p_lo = std::isfinite(lo) ? noise.cdf(lo - c) : 0.0;
  return 1.0 - std::max(0.0, p_hi - p_lo);
}

}  // namespace

BoundValidation bound_validation_experiment(const ToyProblem& toy, long K, long R, int rho1,
                                            long draws, std::uint64_t seed,
                                            RemovalAlgorithm algorithm) {
  if (draws < 1) throw UsageError("bound_validation_experiment: need draws >= 1");
  if (toy.model.state_dim() != 1 || toy.model.input_dim() != 1 || toy.model.is_multiplicative()) {
    throw UsageError("bound_validation_experiment: toy problem must be 1-D additive");
  }

  const double bound = expected_violation_bound(K, R, rho1);
  const RngStream root(seed);
  const double a = toy.model.A0()(0, 0);
  const double b = toy.model.B0()(0, 0);
  const ScalarDist& noise = toy.model.noise_dists().front();

  double sum = 0.0;
  double sum_sq = 0.0;
  for (long d = 0; d < draws; ++d) {
    const std::vector<Scenario> scenarios =
        sample_scenarios(toy.model, static_cast<int>(K), toy.horizon,
                         root.substream(static_cast<std::uint64_t>(d)));
    const ScenarioProgram program =
        assemble(toy.x0, scenarios, toy.cost, {{toy.state_set, static_cast<int>(K)}},
                 toy.input_set, 0.0);
    std::vector<std::uint8_t> mask(program.row_tags.size(), 1);
    const RemovalOutcome outcome =
        remove_scenarios(program, algorithm, static_cast<int>(R), -1, mask);
    const double u0 = outcome.final.u_stack(0);
    const double v = exact_scalar_violation(noise, a * toy.x0(0) + b * u0, toy.state_set);
    sum += v;
    sum_sq += v * v;
  }

  const double mean = sum / static_cast<double>(draws);
  double std_error = 0.0;
  if (draws > 1) {
    const double var = std::max(0.0, (sum_sq - sum * mean) / static_cast<double>(draws - 1));
    std_error = std::sqrt(var / static_cast<double>(draws));
  }
  return {mean, std_error, bound, draws};
}

}  // namespace scmpc
