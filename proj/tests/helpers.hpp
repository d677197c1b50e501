#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "scmpc/model.hpp"
#include "scmpc/polytope.hpp"
#include "scmpc/scenario_program.hpp"

// Shared fixtures: the two-state benchmark system
//   x+ = [0.7, -0.1(2+theta); -0.1(3+2theta), 0.9] x + u + w,
// theta ~ U(0,1), w_i zero-mean normal with std 0.1, and its constraint
// sets.
namespace testutil {

inline scmpc::SystemModel benchmark_model() {
  Eigen::MatrixXd A0(2, 2), A1(2, 2);
  A0 << 0.7, -0.2, -0.3, 0.9;
  A1 << 0.0, -0.1, -0.2, 0.0;
  Eigen::MatrixXd B0 = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd B1 = Eigen::MatrixXd::Zero(2, 2);
  return {A0, {A1}, B0, {B1},
          {scmpc::ScalarDist::uniform(0.0, 1.0)},
          {scmpc::ScalarDist::normal(0.0, 0.01), scmpc::ScalarDist::normal(0.0, 0.01)}};
}

// X1 = {x : x(axis) >= 1}
inline scmpc::Polytope axis_lower_bound(int axis) {
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(1, 2);
  H(0, axis) = -1.0;
  Eigen::VectorXd h(1);
  h << -1.0;
  return {H, h};
}

inline scmpc::Polytope joint_constraint() {
  return axis_lower_bound(0).intersect(axis_lower_bound(1));
}

inline scmpc::Polytope input_box() {
  Eigen::VectorXd five(2);
  five << 5.0, 5.0;
  return scmpc::Polytope::box(-five, five);
}

inline scmpc::StageCost identity_cost() {
  return {Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2)};
}

// A deterministic model (point-mass distributions) with the given matrices.
inline scmpc::SystemModel deterministic_model(const Eigen::MatrixXd& A,
                                              const Eigen::MatrixXd& B) {
  std::vector<scmpc::ScalarDist> noise(static_cast<std::size_t>(A.rows()),
                                       scmpc::ScalarDist::constant(0.0));
  return {A, {}, B, {}, {}, noise};
}

// Scalar scenario program: x+ = x + u + w_k, X = {x >= 1}, cost u^2.
// Scenario k's single state row reads u >= 1 - x_t - w_k, so the scenario
// with the smallest noise is the binding one.
inline scmpc::ScenarioProgram scalar_program(const std::vector<double>& noise, double x_t = 0.0,
                                             double input_limit = 100.0) {
  std::vector<scmpc::Scenario> scenarios;
  scenarios.reserve(noise.size());
  Eigen::MatrixXd one(1, 1);
  one << 1.0;
  for (const double w : noise) {
    Eigen::VectorXd wv(1);
    wv << w;
    scenarios.push_back({scmpc::SystemRealization{one, one, wv}});
  }
  Eigen::MatrixXd Hx(1, 1);
  Hx << -1.0;
  Eigen::VectorXd hx(1);
  hx << -1.0;
  Eigen::VectorXd x0(1);
  x0 << x_t;
  Eigen::VectorXd lim(1);
  lim << input_limit;
  const scmpc::StageCost cost(Eigen::MatrixXd::Zero(1, 1), one);
  return scmpc::assemble(x0, scenarios, cost,
                         {{scmpc::Polytope(Hx, hx), static_cast<int>(noise.size())}},
                         scmpc::Polytope::box(-lim, lim), 0.0);
}

// Gauss-Legendre nodes and weights on [a, b] via the Golub-Welsch
// eigenvalue method.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n, double a, double b) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = beta;
    J(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  Eigen::VectorXd nodes = eig.eigenvalues();
  Eigen::VectorXd weights(n);
  for (int i = 0; i < n; ++i) {
    const double v = eig.eigenvectors()(0, i);
    weights(i) = 2.0 * v * v;
  }
  // map [-1, 1] -> [a, b]
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  nodes = (nodes.array() * half + mid).matrix();
  weights *= half;
  return {nodes, weights};
}

}  // namespace testutil
