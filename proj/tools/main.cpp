#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "scmpc/complexity.hpp"
#include "scmpc/config.hpp"
#include "scmpc/errors.hpp"
#include "scmpc/simulator.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

std::vector<long> parse_removals(const std::string& csv) {
  std::vector<long> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stol(item));
  }
  if (out.empty()) throw scmpc::UsageError("--removals: expected a comma-separated list");
  return out;
}

int run_complexity(int rho1, double eps, const std::string& removals_csv,
                   const std::string& sweep_path, long sweep_k_max) {
  const std::vector<long> removals = parse_removals(removals_csv);
  std::cout << "rho1 = " << rho1 << ", epsilon = " << eps << "\n";
  std::cout << std::left << std::setw(8) << "R" << std::setw(10) << "K"
            << "bound\n";
  for (const long R : removals) {
    const long K = scmpc::min_sample_size(R, rho1, eps);
    const double bound = scmpc::expected_violation_bound(K, R, rho1);
    std::cout << std::left << std::setw(8) << R << std::setw(10) << K << std::setprecision(6)
              << bound << "\n";
  }
  if (!sweep_path.empty()) {
    std::ofstream out(sweep_path);
    if (!out) throw scmpc::ConfigError("cannot open sweep output file: " + sweep_path);
    out << "R,K,bound\n" << std::setprecision(12);
    for (const long R : removals) {
      for (long K = R + rho1; K <= sweep_k_max; ++K) {
        out << R << ',' << K << ',' << scmpc::expected_violation_bound(K, R, rho1) << '\n';
      }
    }
    std::cout << "sweep written to " << sweep_path << "\n";
  }
  return kExitOk;
}

void write_outputs(const std::filesystem::path& dir, const std::string& suffix,
                   const scmpc::ExperimentConfig& cfg, const scmpc::ExperimentResult& result) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / ("trajectory" + suffix + ".csv"));
    if (!csv) throw scmpc::ConfigError("cannot write trajectory csv in " + dir.string());
    scmpc::write_trajectory_csv(csv, cfg, result.record);
  }
  {
    std::ofstream stats(dir / ("stats" + suffix + ".json"));
    if (!stats) throw scmpc::ConfigError("cannot write stats json in " + dir.string());
    stats << scmpc::stats_json(cfg, result.record, result.wall_seconds).dump(2) << '\n';
  }
}

int run_simulate(const std::string& config_path, const std::string& output_dir_override,
                 bool force, long steps_override, int replications,
                 long controller_seed_override, long plant_seed_override) {
  scmpc::ExperimentConfig cfg = scmpc::load_experiment_config_file(config_path);
  if (!output_dir_override.empty()) cfg.output_dir = output_dir_override;
  if (steps_override > 0) cfg.steps = steps_override;
  if (controller_seed_override >= 0) {
    cfg.controller.seed = static_cast<std::uint64_t>(controller_seed_override);
  }
  if (plant_seed_override >= 0) cfg.plant_seed = static_cast<std::uint64_t>(plant_seed_override);
  cfg.controller.force_inadmissible = force;

  bool refused = false;
  for (const auto& report : scmpc::admissibility_check(cfg.controller)) {
    if (!report.admissible) {
      const auto& c = cfg.controller.constraints[static_cast<std::size_t>(report.constraint)];
      std::cerr << "constraint " << report.constraint << ": (K=" << c.samples
                << ", R=" << c.removals << ") is inadmissible, bound " << report.bound
                << " > epsilon " << c.chance.epsilon << "\n";
      refused = true;
    }
  }
  if (refused && !force) {
    std::cerr << "refusing to run an inadmissible configuration (use --force to override)\n";
    return kExitConfig;
  }

  const std::filesystem::path dir(cfg.output_dir);
  if (replications <= 1) {
    const scmpc::ExperimentResult result = scmpc::run_experiment(cfg);
    write_outputs(dir, "", cfg, result);
    if (result.record.truncated) {
      std::cerr << "simulation infeasible at step " << result.record.failure_step << "\n";
      return kExitInfeasible;
    }
    std::cout << scmpc::stats_json(cfg, result.record, result.wall_seconds).dump(2) << "\n";
    return kExitOk;
  }

  // Replications fan out over derived seed pairs and run in parallel.
  std::vector<std::future<scmpc::ExperimentResult>> futures;
  std::vector<scmpc::ExperimentConfig> configs;
  configs.reserve(static_cast<std::size_t>(replications));
  for (int rep = 0; rep < replications; ++rep) {
    scmpc::ExperimentConfig rep_cfg = cfg;
    rep_cfg.controller.seed = cfg.controller.seed + static_cast<std::uint64_t>(rep);
    rep_cfg.plant_seed = cfg.plant_seed + static_cast<std::uint64_t>(rep);
    configs.push_back(std::move(rep_cfg));
  }
  for (int rep = 0; rep < replications; ++rep) {
    futures.push_back(std::async(std::launch::async, [&configs, rep] {
      return scmpc::run_experiment(configs[static_cast<std::size_t>(rep)]);
    }));
  }

  nlohmann::json summary = nlohmann::json::array();
  bool any_truncated = false;
  for (int rep = 0; rep < replications; ++rep) {
    const scmpc::ExperimentResult result = futures[static_cast<std::size_t>(rep)].get();
    const auto& rep_cfg = configs[static_cast<std::size_t>(rep)];
    write_outputs(dir, "_rep" + std::to_string(rep), rep_cfg, result);
    summary.push_back(scmpc::stats_json(rep_cfg, result.record, result.wall_seconds));
    any_truncated = any_truncated || result.record.truncated;
  }
  {
    std::ofstream out(dir / "summary.json");
    out << summary.dump(2) << '\n';
  }
  std::cout << "wrote " << replications << " replications to " << dir.string() << "\n";
  return any_truncated ? kExitInfeasible : kExitOk;
}

int run_validate_bound(long K, long R, int rho1, long draws, long seed) {
  const scmpc::ToyProblem toy = scmpc::make_default_toy();
  const scmpc::BoundValidation v = scmpc::bound_validation_experiment(
      toy, K, R, rho1, draws, static_cast<std::uint64_t>(seed));
  std::cout << std::setprecision(6) << "empirical mean violation = " << v.empirical_mean
            << " (std error " << v.std_error << ", " << v.draws << " draws)\n"
            << "expected violation bound = " << v.bound << "\n";
  const bool within = v.empirical_mean <= v.bound + 3.0 * v.std_error;
  std::cout << (within ? "empirical mean within bound" : "empirical mean EXCEEDS bound") << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scenario-based model predictive control toolkit"};
  app.require_subcommand(1);

  auto* complexity = app.add_subcommand(
      "complexity", "minimal sample sizes and expected-violation bounds");
  int rho1 = 1;
  double eps = 0.1;
  std::string removals = "0";
  std::string sweep_path;
  long sweep_k_max = 2000;
  complexity->add_option("--rho1", rho1, "support-rank bound")->check(CLI::PositiveNumber);
  complexity->add_option("--eps", eps, "violation level in (0, 0.5)")->required();
  complexity->add_option("--removals", removals, "comma-separated removal counts");
  complexity->add_option("--sweep", sweep_path, "write (R, K, bound) curves to this CSV");
  complexity->add_option("--k-max", sweep_k_max, "largest K in the sweep");

  auto* simulate = app.add_subcommand("simulate", "closed-loop Monte Carlo from a JSON config");
  std::string config_path;
  std::string output_dir;
  bool force = false;
  long steps_override = 0;
  int replications = 1;
  long controller_seed = -1;
  long plant_seed = -1;
  simulate->add_option("config", config_path, "experiment config (JSON)")->required();
  simulate->add_option("--output-dir", output_dir, "override the config's output directory");
  simulate->add_flag("--force", force, "run even if a sample-removal pair is inadmissible");
  simulate->add_option("--steps", steps_override, "override the step count");
  simulate->add_option("--replications", replications, "seed-varied parallel replications");
  simulate->add_option("--controller-seed", controller_seed, "override the controller seed");
  simulate->add_option("--plant-seed", plant_seed, "override the plant seed");

  auto* validate = app.add_subcommand(
      "validate-bound", "empirical check of the expected-violation bound on a 1-D toy problem");
  long vb_samples = 9;
  long vb_removals = 0;
  int vb_rho1 = 1;
  long vb_draws = 1000;
  long vb_seed = 424242;
  validate->add_option("--samples", vb_samples, "scenario count K");
  validate->add_option("--removals", vb_removals, "removal count R");
  validate->add_option("--rho1", vb_rho1, "support-rank bound");
  validate->add_option("--draws", vb_draws, "independent scenario-set draws");
  validate->add_option("--seed", vb_seed, "rng seed");

  try {
    app.parse(argc, argv);
    if (complexity->parsed()) {
      return run_complexity(rho1, eps, removals, sweep_path, sweep_k_max);
    }
    if (simulate->parsed()) {
      return run_simulate(config_path, output_dir, force, steps_override, replications,
                          controller_seed, plant_seed);
    }
    if (validate->parsed()) {
      return run_validate_bound(vb_samples, vb_removals, vb_rho1, vb_draws, vb_seed);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  } catch (const scmpc::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const scmpc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const scmpc::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
