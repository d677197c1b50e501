#include "scmpc/config.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>

#include "scmpc/complexity.hpp"
#include "scmpc/errors.hpp"

namespace scmpc {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& context) {
  if (!j.is_object()) throw ConfigError(context + ": expected an object");
}

// Strict schema: every present key must be in the allowed set.
void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::set<std::string>& required, const std::string& context) {
  require_object(j, context);
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError(context + ": unknown key \"" + item.key() + "\"");
    }
  }
  for (const auto& key : required) {
    if (!j.contains(key)) throw ConfigError(context + ": missing required key \"" + key + "\"");
  }
}

Eigen::MatrixXd parse_matrix(const json& j, const std::string& context) {
  if (!j.is_array() || j.empty()) throw ConfigError(context + ": expected a nested array");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) throw ConfigError(context + ": expected rows as arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError(context + ": ragged matrix rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw ConfigError(context + ": matrix entries must be numbers");
      M(r, c) = v.get<double>();
    }
  }
  return M;
}

Eigen::VectorXd parse_vector(const json& j, const std::string& context) {
  if (!j.is_array()) throw ConfigError(context + ": expected an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const auto& e = j[static_cast<std::size_t>(i)];
    if (!e.is_number()) throw ConfigError(context + ": vector entries must be numbers");
    v(i) = e.get<double>();
  }
  return v;
}

ScalarDist parse_dist(const json& j, const std::string& context) {
  check_keys(j, {"type", "a", "b", "mean", "variance"}, {"type"}, context);
  const std::string type = j.at("type").get<std::string>();
  if (type == "uniform") {
    check_keys(j, {"type", "a", "b"}, {"type", "a", "b"}, context);
    return ScalarDist::uniform(j.at("a").get<double>(), j.at("b").get<double>());
  }
  if (type == "normal") {
    check_keys(j, {"type", "mean", "variance"}, {"type", "mean", "variance"}, context);
    return ScalarDist::normal(j.at("mean").get<double>(), j.at("variance").get<double>());
  }
  throw ConfigError(context + ": unknown distribution type \"" + type + "\"");
}

std::vector<ScalarDist> parse_dists(const json& j, const std::string& context) {
  if (!j.is_array()) throw ConfigError(context + ": expected an array of distributions");
  std::vector<ScalarDist> dists;
  dists.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    dists.push_back(parse_dist(j[i], context + "[" + std::to_string(i) + "]"));
  }
  return dists;
}

std::vector<Eigen::MatrixXd> parse_matrix_list(const json& j, const std::string& context) {
  if (!j.is_array()) throw ConfigError(context + ": expected an array of matrices");
  std::vector<Eigen::MatrixXd> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(parse_matrix(j[i], context + "[" + std::to_string(i) + "]"));
  }
  return out;
}

SystemModel parse_system(const json& j) {
  check_keys(j,
             {"n", "m", "A0", "A_terms", "B0", "B_terms", "parameters", "noise"},
             {"n", "m", "A0", "B0", "parameters", "noise"}, "system");
  const auto n = j.at("n").get<Eigen::Index>();
  const auto m = j.at("m").get<Eigen::Index>();
  Eigen::MatrixXd A0 = parse_matrix(j.at("A0"), "system.A0");
  Eigen::MatrixXd B0 = parse_matrix(j.at("B0"), "system.B0");
  if (A0.rows() != n || A0.cols() != n) throw ConfigError("system.A0: expected n x n");
  if (B0.rows() != n || B0.cols() != m) throw ConfigError("system.B0: expected n x m");

  std::vector<ScalarDist> parameters = parse_dists(j.at("parameters"), "system.parameters");
  std::vector<Eigen::MatrixXd> A_terms =
      j.contains("A_terms") ? parse_matrix_list(j.at("A_terms"), "system.A_terms")
                            : std::vector<Eigen::MatrixXd>{};
  std::vector<Eigen::MatrixXd> B_terms =
      j.contains("B_terms") ? parse_matrix_list(j.at("B_terms"), "system.B_terms")
                            : std::vector<Eigen::MatrixXd>{};
  // Omitted term lists mean the matrices do not depend on the parameters.
  if (A_terms.empty()) A_terms.assign(parameters.size(), Eigen::MatrixXd::Zero(n, n));
  if (B_terms.empty()) B_terms.assign(parameters.size(), Eigen::MatrixXd::Zero(n, m));

  return {std::move(A0), std::move(A_terms), std::move(B0), std::move(B_terms),
          std::move(parameters), parse_dists(j.at("noise"), "system.noise")};
}

Polytope parse_polytope(const json& j, const std::string& context) {
  check_keys(j, {"H", "h", "box"}, {}, context);
  if (j.contains("box")) {
    if (j.contains("H") || j.contains("h")) {
      throw ConfigError(context + ": give either box or H/h, not both");
    }
    const auto& box = j.at("box");
    check_keys(box, {"lower", "upper"}, {"lower", "upper"}, context + ".box");
    return Polytope::box(parse_vector(box.at("lower"), context + ".box.lower"),
                         parse_vector(box.at("upper"), context + ".box.upper"));
  }
  if (!j.contains("H") || !j.contains("h")) {
    throw ConfigError(context + ": expected H and h (or box)");
  }
  return {parse_matrix(j.at("H"), context + ".H"), parse_vector(j.at("h"), context + ".h")};
}

RemovalAlgorithm parse_algorithm(const std::string& name) {
  if (name == "optimal") return RemovalAlgorithm::optimal;
  if (name == "greedy") return RemovalAlgorithm::greedy;
  if (name == "marginal") return RemovalAlgorithm::marginal;
  throw ConfigError("removal_algorithm: unknown algorithm \"" + name + "\"");
}

}  // namespace

const char* to_string(RemovalAlgorithm algorithm) {
  switch (algorithm) {
    case RemovalAlgorithm::optimal: return "optimal";
    case RemovalAlgorithm::greedy: return "greedy";
    case RemovalAlgorithm::marginal: return "marginal";
  }
  return "unknown";
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::soft_active: return "soft_active";
  }
  return "unknown";
}

ExperimentConfig load_experiment_config(const json& j) {
  check_keys(j,
             {"system", "horizon", "constraints", "input_set", "cost", "removal_algorithm",
              "greedy_metric", "slack_penalty", "steps", "x0", "seeds", "output_dir"},
             {"system", "horizon", "constraints", "input_set", "cost", "steps", "x0"},
             "config");

  SystemModel model = parse_system(j.at("system"));
  const int N = j.at("horizon").get<int>();
  if (N < 1) throw ConfigError("horizon: must be >= 1");

  const auto& jc = j.at("cost");
  check_keys(jc, {"Q", "R"}, {"Q", "R"}, "cost");
  StageCost cost(parse_matrix(jc.at("Q"), "cost.Q"), parse_matrix(jc.at("R"), "cost.R"));

  std::vector<ConstraintConfig> constraints;
  const auto& jcs = j.at("constraints");
  if (!jcs.is_array()) throw ConfigError("constraints: expected an array");
  for (std::size_t i = 0; i < jcs.size(); ++i) {
    const std::string ctx = "constraints[" + std::to_string(i) + "]";
    const auto& c = jcs[i];
    check_keys(c, {"H", "h", "epsilon", "removals", "rho1", "samples"}, {"H", "h", "epsilon"},
               ctx);
    Polytope set(parse_matrix(c.at("H"), ctx + ".H"), parse_vector(c.at("h"), ctx + ".h"));
    const double epsilon = c.at("epsilon").get<double>();
    const long removals = c.contains("removals") ? c.at("removals").get<long>() : 0;
    if (removals < 0) throw ConfigError(ctx + ".removals: must be >= 0");
    const int rho1 = c.contains("rho1") ? c.at("rho1").get<int>()
                                        : support_rank_bound(model, set, N).rho1;
    ChanceConstraintSpec chance(std::move(set), epsilon, rho1);
    const long samples = c.contains("samples") ? c.at("samples").get<long>()
                                               : min_sample_size(removals, rho1, epsilon);
    constraints.push_back({std::move(chance), samples, removals});
  }

  ControllerConfig controller{
      .horizon = N,
      .constraints = std::move(constraints),
      .input_set = parse_polytope(j.at("input_set"), "input_set"),
      .cost = std::move(cost),
  };
  if (j.contains("removal_algorithm")) {
    controller.removal_algorithm = parse_algorithm(j.at("removal_algorithm").get<std::string>());
  }
  if (j.contains("greedy_metric")) {
    const std::string metric = j.at("greedy_metric").get<std::string>();
    if (metric == "total_cost") {
      controller.greedy_metric = GreedyMetric::total_cost;
    } else if (metric == "first_stage_cost") {
      controller.greedy_metric = GreedyMetric::first_stage_cost;
    } else {
      throw ConfigError("greedy_metric: unknown metric \"" + metric + "\"");
    }
  }
  if (j.contains("slack_penalty")) {
    controller.slack_penalty = j.at("slack_penalty").get<double>();
  }

  ExperimentConfig cfg{
      .model = std::move(model),
      .controller = std::move(controller),
      .x0 = parse_vector(j.at("x0"), "x0"),
      .steps = j.at("steps").get<long>(),
      .plant_seed = kDefaultPlantSeed,
      .output_dir = j.contains("output_dir") ? j.at("output_dir").get<std::string>() : ".",
  };
  if (cfg.steps < 1) throw ConfigError("steps: must be >= 1");
  if (cfg.x0.size() != cfg.model.state_dim()) {
    throw ConfigError("x0: dimension does not match the system state");
  }
  if (j.contains("seeds")) {
    const auto& s = j.at("seeds");
    check_keys(s, {"controller", "plant"}, {}, "seeds");
    if (s.contains("controller")) {
      cfg.controller.seed = s.at("controller").get<std::uint64_t>();
    }
    if (s.contains("plant")) cfg.plant_seed = s.at("plant").get<std::uint64_t>();
  }
  return cfg;
}

ExperimentConfig load_experiment_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  return load_experiment_config(j);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  ClosedLoopRecord record =
      simulate(config.model, config.controller, config.x0, config.steps, config.plant_seed);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return {std::move(record), wall};
}

void write_trajectory_csv(std::ostream& out, const ExperimentConfig& config,
                          const ClosedLoopRecord& record) {
  const Eigen::Index n = config.model.state_dim();
  const Eigen::Index m = config.model.input_dim();
  out << "t";
  for (Eigen::Index i = 0; i < n; ++i) out << ",x" << i;
  for (Eigen::Index i = 0; i < m; ++i) out << ",u" << i;
  for (std::size_t j = 0; j < config.controller.constraints.size(); ++j) out << ",viol" << j;
  out << ",stage_cost,solver_status\n";
  out << std::setprecision(17);
  for (std::size_t t = 0; t < record.inputs.size(); ++t) {
    out << t;
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << record.states[t](i);
    for (Eigen::Index i = 0; i < m; ++i) out << ',' << record.inputs[t](i);
    for (const auto flag : record.violations[t]) out << ',' << static_cast<int>(flag);
    out << ',' << record.stage_costs[t] << ',' << to_string(record.statuses[t]) << '\n';
  }
}

json stats_json(const ExperimentConfig& config, const ClosedLoopRecord& record,
                double wall_seconds) {
  json constraints = json::array();
  for (std::size_t j = 0; j < config.controller.constraints.size(); ++j) {
    const auto& c = config.controller.constraints[j];
    const SampleRemovalPair pair =
        evaluate_pair(c.samples, c.removals, c.chance.rho1_bound, c.chance.epsilon);
    constraints.push_back({
        {"epsilon", c.chance.epsilon},
        {"samples", c.samples},
        {"removals", c.removals},
        {"rho1", c.chance.rho1_bound},
        {"bound", pair.expected_violation},
        {"admissible", pair.admissible()},
        {"v_avg", record.stats.violation_avg[j]},
    });
  }
  return json{
      {"constraints", constraints},
      {"cost_avg", record.stats.cost_avg},
      {"cost_std", record.stats.cost_std},
      {"soft_activations", record.stats.soft_activations},
      {"steps", static_cast<long>(record.inputs.size())},
      {"truncated", record.truncated},
      {"failure_step", record.failure_step},
      {"seeds", {{"controller", config.controller.seed}, {"plant", config.plant_seed}}},
      {"removal_algorithm", to_string(config.controller.removal_algorithm)},
      {"slack_penalty", config.controller.slack_penalty},
      {"horizon", config.controller.horizon},
      {"wall_time_seconds", wall_seconds},
  };
}

}  // namespace scmpc
