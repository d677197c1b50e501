#include <doctest.h>

#include <Eigen/Dense>

#include "helpers.hpp"
#include "qp_oracle.hpp"
#include "scmpc/errors.hpp"
#include "scmpc/scenario_program.hpp"

using namespace scmpc;

namespace {

// Step-by-step simulation oracle for the condensed prediction.
Eigen::VectorXd simulate_prediction(const Scenario& scenario, const Eigen::VectorXd& x_t,
                                    const Eigen::VectorXd& u_stack, int stage) {
  const Eigen::Index m = scenario.front().B.cols();
  Eigen::VectorXd x = x_t;
  for (int i = 0; i < stage; ++i) {
    const auto& r = scenario[static_cast<std::size_t>(i)];
    x = r.A * x + r.B * u_stack.segment(static_cast<Eigen::Index>(i) * m, m) + r.w;
  }
  return x;
}

std::vector<Scenario> random_scenarios(int K, int N, Eigen::Index n, Eigen::Index m,
                                       RngCursor& cur) {
  std::vector<Scenario> scenarios(static_cast<std::size_t>(K));
  for (auto& scenario : scenarios) {
    for (int i = 0; i < N; ++i) {
      SystemRealization r;
      r.A.setZero(n, n);
      r.B.setZero(n, m);
      r.w.setZero(n);
      for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) r.A(a, b) = 2.0 * cur.u01() - 1.0;
        for (Eigen::Index b = 0; b < m; ++b) r.B(a, b) = 2.0 * cur.u01() - 1.0;
        r.w(a) = 2.0 * cur.u01() - 1.0;
      }
      scenario.push_back(std::move(r));
    }
  }
  return scenarios;
}

}  // namespace

TEST_CASE("condense: identity dynamics worked example") {
  Scenario scenario(2, SystemRealization{Eigen::MatrixXd::Identity(2, 2),
                                         Eigen::MatrixXd::Identity(2, 2),
                                         Eigen::VectorXd::Zero(2)});
  Eigen::Vector2d x_t(1.0, 1.0);
  const CondensedTrajectory c = condense(x_t, {scenario});
  Eigen::MatrixXd expected_gain(2, 4);
  expected_gain << 1, 0, 0, 0, 0, 1, 0, 0;
  CHECK(c.gain[0][0].isApprox(expected_gain, 1e-15));
  CHECK(c.offset[0][0].isApprox(x_t, 1e-15));
  expected_gain << 1, 0, 1, 0, 0, 1, 0, 1;
  CHECK(c.gain[0][1].isApprox(expected_gain, 1e-15));
  CHECK(c.offset[0][1].isApprox(x_t, 1e-15));
}

TEST_CASE("condense: zero A wipes the x_t dependence after stage 1") {
  RngCursor cur{RngStream(3)};
  auto scenarios = random_scenarios(1, 3, 2, 1, cur);
  for (auto& r : scenarios[0]) r.A.setZero();
  Eigen::Vector2d x_t(5.0, -3.0);
  const CondensedTrajectory c = condense(x_t, scenarios);
  CHECK(c.offset[0][0] == scenarios[0][0].w);  // A x_t = 0 already at stage 1
  CHECK(c.offset[0][1] == scenarios[0][1].w);
  CHECK(c.offset[0][2] == scenarios[0][2].w);
}

TEST_CASE("condensed prediction matches iterated simulation to 1e-9") {
  RngStream rng(2718);
  for (int trial = 0; trial < 50; ++trial) {
    RngCursor cur(rng.substream(static_cast<std::uint64_t>(trial)));
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(cur.u01() * 3.0);
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(cur.u01() * 2.0);
    const int N = 1 + static_cast<int>(cur.u01() * 4.0);
    const int K = 1 + static_cast<int>(cur.u01() * 3.0);
    const auto scenarios = random_scenarios(K, N, n, m, cur);
    Eigen::VectorXd x_t(n), u(static_cast<Eigen::Index>(N) * m);
    for (Eigen::Index i = 0; i < n; ++i) x_t(i) = 2.0 * cur.u01() - 1.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = 2.0 * cur.u01() - 1.0;

    const CondensedTrajectory c = condense(x_t, scenarios);
    for (int k = 0; k < K; ++k) {
      for (int stage = 1; stage <= N; ++stage) {
        const Eigen::VectorXd direct =
            simulate_prediction(scenarios[static_cast<std::size_t>(k)], x_t, u, stage);
        CHECK((c.predict(k, stage, u) - direct).cwiseAbs().maxCoeff() <= 1e-9);
      }
    }
  }
}

TEST_CASE("condensed gains respect causality") {
  RngCursor cur{RngStream(99)};
  const auto scenarios = random_scenarios(2, 4, 3, 2, cur);
  const CondensedTrajectory c = condense(Eigen::VectorXd::Zero(3), scenarios);
  for (int stage = 1; stage <= 4; ++stage) {
    const auto& G = c.gain[0][static_cast<std::size_t>(stage - 1)];
    if (stage < 4) {
      CHECK(G.rightCols(G.cols() - 2 * stage).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("assemble: benchmark row counts and tags") {
  const SystemModel model = testutil::benchmark_model();
  const auto scenarios = sample_scenarios(model, 19, 5, RngStream(4));
  Eigen::Vector2d x_t(1.0, 1.0);
  const ScenarioProgram p = assemble(x_t, scenarios, testutil::identity_cost(),
                                     {{testutil::joint_constraint(), 19}},
                                     testutil::input_box(), 0.0);
  CHECK(p.hessian.rows() == 10);  // decision dimension N*m independent of K
  CHECK(p.state_row_count == 19 * 5 * 2);
  CHECK(p.inequality_A.rows() == 190 + 20);
  for (Eigen::Index r = 0; r < p.state_row_count; ++r) {
    const RowTag& tag = p.row_tags[static_cast<std::size_t>(r)];
    CHECK(tag.kind == RowKind::state);
    CHECK(tag.scenario >= 0);
    CHECK(tag.scenario < 19);
    CHECK(tag.stage >= 1);
    CHECK(tag.stage <= 5);
  }
  CHECK(p.rows_of(0).size() == 10);     // 5 stages x 2 halfspaces
  CHECK(p.rows_of(0, 0).size() == 10);  // single constraint owns them all
}

TEST_CASE("assemble: objective equals the averaged stage-cost sum") {
  const SystemModel model = testutil::benchmark_model();
  const StageCost cost = testutil::identity_cost();
  const auto scenarios = sample_scenarios(model, 7, 4, RngStream(11));
  Eigen::Vector2d x_t(0.3, -1.2);
  const ScenarioProgram p = assemble(x_t, scenarios, cost, {{testutil::joint_constraint(), 7}},
                                     testutil::input_box(), 0.0);
  RngCursor cur{RngStream(12)};
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd u(8);
    for (Eigen::Index i = 0; i < 8; ++i) u(i) = 4.0 * cur.u01() - 2.0;
    double expected = 0.0;
    const CondensedTrajectory c = condense(x_t, scenarios);
    for (int k = 0; k < 7; ++k) {
      expected += cost.value(x_t, u.head(2));
      for (int i = 1; i <= 3; ++i) {
        expected += cost.value(c.predict(k, i, u), u.segment(2 * i, 2));
      }
    }
    expected /= 7.0;
    CHECK(p.objective_value(u) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("assemble validates scenario subsets and dimensions") {
  const SystemModel model = testutil::benchmark_model();
  const auto scenarios = sample_scenarios(model, 3, 2, RngStream(8));
  Eigen::Vector2d x_t(1.0, 1.0);
  CHECK_THROWS_AS(assemble(x_t, scenarios, testutil::identity_cost(),
                           {{testutil::joint_constraint(), 4}}, testutil::input_box(), 0.0),
                  UsageError);
  CHECK_THROWS_AS(assemble(x_t, scenarios, testutil::identity_cost(),
                           {{Polytope::full_space(3), 2}}, testutil::input_box(), 0.0),
                  UsageError);
  CHECK_THROWS_AS(assemble(x_t, {}, testutil::identity_cost(), {}, testutil::input_box(), 0.0),
                  UsageError);
}

TEST_CASE("solve matches the enumeration oracle on the benchmark program") {
  const SystemModel model = testutil::benchmark_model();
  for (int seed = 0; seed < 5; ++seed) {
    const auto scenarios =
        sample_scenarios(model, 4, 2, RngStream(static_cast<std::uint64_t>(seed)));
    Eigen::Vector2d x_t(1.1, 1.4);
    const ScenarioProgram p = assemble(x_t, scenarios, testutil::identity_cost(),
                                       {{testutil::joint_constraint(), 4}},
                                       testutil::input_box(), 0.0);
    const QPSolution sol = solve(p);
    REQUIRE(sol.status == SolveStatus::optimal);
    const testutil::OracleSolution oracle =
        testutil::qp_oracle(p.hessian, p.gradient, p.inequality_A, p.inequality_b);
    REQUIRE(oracle.feasible);
    CHECK(sol.objective - p.objective_constant ==
          doctest::Approx(oracle.objective).epsilon(1e-6));
  }
}

TEST_CASE("identical scenarios average to the single-scenario program") {
  const SystemModel model = testutil::deterministic_model(Eigen::MatrixXd::Identity(2, 2),
                                                          Eigen::MatrixXd::Identity(2, 2));
  Eigen::Vector2d x_t(2.0, 2.0);
  const auto one = sample_scenarios(model, 1, 3, RngStream(1));
  const auto many = sample_scenarios(model, 5, 3, RngStream(2));
  const ScenarioProgram p1 = assemble(x_t, one, testutil::identity_cost(),
                                      {{testutil::joint_constraint(), 1}},
                                      testutil::input_box(), 0.0);
  const ScenarioProgram p5 = assemble(x_t, many, testutil::identity_cost(),
                                      {{testutil::joint_constraint(), 5}},
                                      testutil::input_box(), 0.0);
  CHECK(p1.hessian.isApprox(p5.hessian, 1e-12));
  CHECK(p1.gradient.isApprox(p5.gradient, 1e-12));
  CHECK(solve(p1).u_stack.isApprox(solve(p5).u_stack, 1e-8));
}

TEST_CASE("relaxation monotonicity: deleting state rows never raises the objective") {
  const SystemModel model = testutil::benchmark_model();
  const auto scenarios = sample_scenarios(model, 6, 3, RngStream(21));
  Eigen::Vector2d x_t(1.0, 1.0);
  const ScenarioProgram p = assemble(x_t, scenarios, testutil::identity_cost(),
                                     {{testutil::joint_constraint(), 6}},
                                     testutil::input_box(), 0.0);
  const double full = solve(p).objective;
  RngCursor cur{RngStream(22)};
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::uint8_t> mask(p.row_tags.size(), 1);
    for (Eigen::Index r = 0; r < p.state_row_count; ++r) {
      if (cur.u01() < 0.3) mask[static_cast<std::size_t>(r)] = 0;
    }
    CHECK(solve(p, mask).objective <= full + 1e-9);
  }
}

TEST_CASE("positive rescaling of the objective keeps the minimizer") {
  const SystemModel model = testutil::benchmark_model();
  const auto scenarios = sample_scenarios(model, 5, 3, RngStream(31));
  Eigen::Vector2d x_t(1.2, 0.9);
  ScenarioProgram p = assemble(x_t, scenarios, testutil::identity_cost(),
                               {{testutil::joint_constraint(), 5}}, testutil::input_box(), 0.0);
  const Eigen::VectorXd u_ref = solve(p).u_stack;
  p.hessian *= 37.5;
  p.gradient *= 37.5;
  p.objective_constant *= 37.5;
  CHECK((solve(p).u_stack - u_ref).cwiseAbs().maxCoeff() <= 1e-7);
}

TEST_CASE("hard infeasibility throws; soft mode activates slacks") {
  // x+ = x + u with |u| <= 0.1 cannot reach x1 >= 10 from the origin.
  const SystemModel model = testutil::deterministic_model(Eigen::MatrixXd::Identity(2, 2),
                                                          Eigen::MatrixXd::Identity(2, 2));
  const auto scenarios = sample_scenarios(model, 1, 1, RngStream(1));
  Eigen::MatrixXd Hx = Eigen::MatrixXd::Zero(1, 2);
  Hx(0, 0) = -1.0;
  Eigen::VectorXd hx(1);
  hx << -10.0;
  const Polytope far_set(Hx, hx);
  Eigen::VectorXd lim = Eigen::VectorXd::Constant(2, 0.1);
  const Polytope tight_box = Polytope::box(-lim, lim);
  const Eigen::Vector2d x_t = Eigen::Vector2d::Zero();

  const ScenarioProgram hard =
      assemble(x_t, scenarios, testutil::identity_cost(), {{far_set, 1}}, tight_box, 0.0);
  CHECK_THROWS_AS(solve(hard), InfeasibleError);

  const ScenarioProgram soft =
      assemble(x_t, scenarios, testutil::identity_cost(), {{far_set, 1}}, tight_box, 1e6);
  const QPSolution sol = solve(soft);
  CHECK(sol.status == SolveStatus::soft_active);
  // Input rows stay hard, the state row is relaxed by the missing 9.9.
  CHECK(sol.u_stack(0) == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(sol.slack_l1 == doctest::Approx(9.9).epsilon(1e-6));
}
