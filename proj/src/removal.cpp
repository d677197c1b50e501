#include "scmpc/removal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "scmpc/errors.hpp"
#include "scmpc/log.hpp"

namespace scmpc {

namespace {

constexpr long kOptimalEnumerationGuard = 1000000;

long binomial_count_capped(long K, long R) {
  double c = 1.0;
  for (long j = 1; j <= R; ++j) {
    c *= static_cast<double>(K - R + j) / static_cast<double>(j);
    if (c > 2.0 * static_cast<double>(kOptimalEnumerationGuard)) break;
  }
  return static_cast<long>(std::llround(std::min(c, 4.0e18)));
}

struct RemovalContext {
  const ScenarioProgram& program;
  int constraint_id;
  std::vector<int> universe;                      // removable scenario indices
  std::vector<std::vector<Eigen::Index>> groups;  // rows toggled per universe entry

  RemovalContext(const ScenarioProgram& p, int constraint)
      : program(p), constraint_id(constraint) {
    for (int k = 0; k < p.scenario_count; ++k) {
      std::vector<Eigen::Index> rows = p.rows_of(k, constraint);
      if (constraint >= 0 && rows.empty()) continue;  // scenario not covered
      universe.push_back(k);
      groups.push_back(std::move(rows));
    }
  }

  void toggle(std::vector<std::uint8_t>& mask, std::size_t pos, bool enabled) const {
    for (const Eigen::Index r : groups[pos]) {
      mask[static_cast<std::size_t>(r)] = enabled ? 1 : 0;
    }
  }

  [[nodiscard]] double dual_mass(const QPSolution& sol, std::size_t pos,
                                 const std::vector<std::uint8_t>& mask) const {
    double s = 0.0;
    for (const Eigen::Index r : groups[pos]) {
      if (mask[static_cast<std::size_t>(r)]) s += sol.dual[r];
    }
    return s;
  }

  [[nodiscard]] double metric_value(const QPSolution& sol, GreedyMetric metric) const {
    if (metric == GreedyMetric::total_cost) return sol.objective;
    const Eigen::VectorXd u0 = sol.u_stack.head(program.input_dim);
    return u0.dot(program.input_stage_quad * u0);
  }
};

RemovalOutcome identity_outcome(const RemovalContext& ctx, std::vector<std::uint8_t>& mask) {
  RemovalOutcome out;
  out.kept = ctx.universe;
  out.solve_count = 1;
  out.final = solve(ctx.program, mask);
  return out;
}

RemovalOutcome run_optimal(const RemovalContext& ctx, int R, std::vector<std::uint8_t>& mask) {
  const long K = static_cast<long>(ctx.universe.size());
  const long count = binomial_count_capped(K, R);
  if (count > kOptimalEnumerationGuard) {
    throw UsageError("remove_optimal: C(" + std::to_string(K) + ", " + std::to_string(R) +
                     ") = " + std::to_string(count) + " subsets exceed the enumeration guard of " +
                     std::to_string(kOptimalEnumerationGuard) + "; use greedy removal instead");
  }

  RemovalOutcome out;
  std::vector<std::size_t> pick(static_cast<std::size_t>(R));
  for (int i = 0; i < R; ++i) pick[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_pick;
  while (true) {
    for (const std::size_t pos : pick) ctx.toggle(mask, pos, false);
    QPSolution sol = solve(ctx.program, mask);
    ++out.solve_count;
    // Strict improvement keeps the lexicographically smallest subset on ties
    // (subsets are enumerated in lexicographic order).
    if (sol.objective < best) {
      best = sol.objective;
      best_pick = pick;
      out.final = std::move(sol);
    }
    for (const std::size_t pos : pick) ctx.toggle(mask, pos, true);

    // next lexicographic R-combination of {0..K-1}
    int i = R - 1;
    while (i >= 0 &&
           pick[static_cast<std::size_t>(i)] == static_cast<std::size_t>(K - R + i)) {
      --i;
    }
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int l = i + 1; l < R; ++l) {
      pick[static_cast<std::size_t>(l)] = pick[static_cast<std::size_t>(l - 1)] + 1;
    }
  }

  for (const std::size_t pos : best_pick) {
    ctx.toggle(mask, pos, false);
    out.removed.push_back(ctx.universe[pos]);
  }
  for (std::size_t pos = 0; pos < ctx.universe.size(); ++pos) {
    if (std::find(best_pick.begin(), best_pick.end(), pos) == best_pick.end()) {
      out.kept.push_back(ctx.universe[pos]);
    }
  }
  return out;
}

RemovalOutcome run_greedy(const RemovalContext& ctx, int R, std::vector<std::uint8_t>& mask,
                          GreedyMetric metric) {
  RemovalOutcome out;
  std::vector<std::size_t> kept(ctx.universe.size());
  for (std::size_t i = 0; i < kept.size(); ++i) kept[i] = i;

  // Incumbent for the current kept set; tentative candidates whose rows
  // carry no dual mass provably reproduce it, so only dual-active scenarios
  // need a numeric re-solve.
  QPSolution incumbent = solve(ctx.program, mask);

  for (int pass = 0; pass < R; ++pass) {
    out.solve_count += static_cast<long>(kept.size());
    const double incumbent_metric = ctx.metric_value(incumbent, metric);

    double best_metric = std::numeric_limits<double>::infinity();
    std::size_t best_at = kept.size();
    QPSolution best_sol;
    bool best_is_incumbent = false;

    for (std::size_t idx = 0; idx < kept.size(); ++idx) {
      const std::size_t pos = kept[idx];
      const bool active = ctx.dual_mass(incumbent, pos, mask) > 0.0;
      double value;
      QPSolution tentative;
      if (active) {
        ctx.toggle(mask, pos, false);
        tentative = solve(ctx.program, mask);
        ctx.toggle(mask, pos, true);
        value = ctx.metric_value(tentative, metric);
      } else {
        value = incumbent_metric;
      }
      if (value < best_metric) {
        best_metric = value;
        best_at = idx;
        best_is_incumbent = !active;
        if (active) best_sol = std::move(tentative);
      }
    }

    const std::size_t pos = kept[best_at];
    ctx.toggle(mask, pos, false);
    out.removed.push_back(ctx.universe[pos]);
    kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(best_at));
    if (!best_is_incumbent) incumbent = std::move(best_sol);
  }

  if (R == 0) out.solve_count = 1;
  for (const std::size_t pos : kept) out.kept.push_back(ctx.universe[pos]);
  out.final = std::move(incumbent);
  return out;
}

RemovalOutcome run_marginal(const RemovalContext& ctx, int R, std::vector<std::uint8_t>& mask) {
  RemovalOutcome out;
  std::vector<std::size_t> kept(ctx.universe.size());
  for (std::size_t i = 0; i < kept.size(); ++i) kept[i] = i;

  QPSolution sol = solve(ctx.program, mask);
  out.solve_count = 1;

  for (int pass = 0; pass < R; ++pass) {
    double best_score = 0.0;
    std::size_t best_at = 0;
    for (std::size_t idx = 0; idx < kept.size(); ++idx) {
      const double score = ctx.dual_mass(sol, kept[idx], mask);
      if (score > best_score) {
        best_score = score;
        best_at = idx;
      }
    }
    if (best_score <= 0.0) {
      log::info("marginal removal: all scenario duals zero, removing smallest index");
    }

    const std::size_t pos = kept[best_at];
    ctx.toggle(mask, pos, false);
    out.removed.push_back(ctx.universe[pos]);
    kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(best_at));

    sol = solve(ctx.program, mask);
    ++out.solve_count;
  }

  for (const std::size_t pos : kept) out.kept.push_back(ctx.universe[pos]);
  out.final = std::move(sol);
  return out;
}

}  // namespace

RemovalOutcome remove_scenarios(const ScenarioProgram& program, RemovalAlgorithm algorithm,
                                int R, int constraint_id, std::vector<std::uint8_t>& row_mask,
                                GreedyMetric metric) {
  if (row_mask.size() != program.row_tags.size()) {
    throw UsageError("remove_scenarios: row mask size does not match the program");
  }
  const RemovalContext ctx(program, constraint_id);
  if (R < 0 || (R > 0 && R >= static_cast<int>(ctx.universe.size()))) {
    throw UsageError("remove_scenarios: need 0 <= R < number of removable scenarios (R=" +
                     std::to_string(R) + ", scenarios=" + std::to_string(ctx.universe.size()) +
                     ")");
  }
  if (R == 0) return identity_outcome(ctx, row_mask);
  switch (algorithm) {
    case RemovalAlgorithm::optimal:
      return run_optimal(ctx, R, row_mask);
    case RemovalAlgorithm::greedy:
      return run_greedy(ctx, R, row_mask, metric);
    case RemovalAlgorithm::marginal:
      return run_marginal(ctx, R, row_mask);
  }
  throw UsageError("remove_scenarios: unknown algorithm");
}

RemovalOutcome remove_optimal(const ScenarioProgram& program, int R) {
  std::vector<std::uint8_t> mask(program.row_tags.size(), 1);
  return remove_scenarios(program, RemovalAlgorithm::optimal, R, -1, mask);
}

RemovalOutcome remove_greedy(const ScenarioProgram& program, int R, GreedyMetric metric) {
  std::vector<std::uint8_t> mask(program.row_tags.size(), 1);
  return remove_scenarios(program, RemovalAlgorithm::greedy, R, -1, mask, metric);
}

RemovalOutcome remove_marginal(const ScenarioProgram& program, int R) {
  std::vector<std::uint8_t> mask(program.row_tags.size(), 1);
  return remove_scenarios(program, RemovalAlgorithm::marginal, R, -1, mask);
}

}  // namespace scmpc
