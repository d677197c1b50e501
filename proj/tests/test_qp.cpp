#include <doctest.h>

#include <Eigen/Dense>

#include "qp_oracle.hpp"
#include "scmpc/errors.hpp"
#include "scmpc/qp.hpp"
#include "scmpc/rng.hpp"

using namespace scmpc;

TEST_CASE("scalar KKT: minimize u^2 subject to u >= 1") {
  Eigen::MatrixXd H(1, 1), A(1, 1);
  H << 2.0;
  A << -1.0;  // -u <= -1
  Eigen::VectorXd g = Eigen::VectorXd::Zero(1), b(1);
  b << -1.0;
  const QpResult r = solve_qp(H, g, A, b);
  REQUIRE(r.status == QpStatus::optimal);
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.objective == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.dual(0) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("unconstrained minimum of u'u + 2'u") {
  Eigen::MatrixXd H = 2.0 * Eigen::MatrixXd::Identity(3, 3);
  Eigen::VectorXd g = Eigen::VectorXd::Constant(3, 2.0);
  const QpResult r = solve_qp(H, g, Eigen::MatrixXd::Zero(0, 3), Eigen::VectorXd::Zero(0));
  REQUIRE(r.status == QpStatus::optimal);
  CHECK(r.x.isApprox(Eigen::VectorXd::Constant(3, -1.0), 1e-12));
}

TEST_CASE("infeasible boxes are detected") {
  Eigen::MatrixXd H(1, 1);
  H << 2.0;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(1);
  Eigen::MatrixXd A(2, 1);
  A << 1.0, -1.0;  // u <= 0 and u >= 1
  Eigen::VectorXd b(2);
  b << 0.0, -1.0;
  CHECK(solve_qp(H, g, A, b).status == QpStatus::infeasible);
}

TEST_CASE("row masks drop constraints from the problem") {
  Eigen::MatrixXd H(1, 1);
  H << 2.0;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(1);
  Eigen::MatrixXd A(2, 1);
  A << -1.0, -1.0;
  Eigen::VectorXd b(2);
  b << -1.0, -3.0;  // u >= 1, u >= 3
  std::vector<std::uint8_t> mask{1, 0};
  const QpResult r = solve_qp(H, g, A, b, &mask);
  CHECK(r.x(0) == doctest::Approx(1.0));
  CHECK(r.dual(1) == 0.0);
}

TEST_CASE("random box QPs match the active-set enumeration oracle") {
  RngStream rng(777);
  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    RngCursor cur(rng.substream(static_cast<std::uint64_t>(trial)));
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(cur.u01() * 5.0);
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j <= i; ++j) L(i, j) = 2.0 * cur.u01() - 1.0;
      L(i, i) += 1.5;  // well conditioned
    }
    const Eigen::MatrixXd H = L * L.transpose();
    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i) g(i) = 4.0 * cur.u01() - 2.0;

    // box plus a couple of random halfspaces
    const Eigen::Index extra = 2;
    Eigen::MatrixXd A(2 * n + extra, n);
    Eigen::VectorXd b(2 * n + extra);
    A.topRows(n) = Eigen::MatrixXd::Identity(n, n);
    A.middleRows(n, n) = -Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      b(i) = 0.2 + cur.u01();
      b(n + i) = 0.2 + cur.u01();
    }
    for (Eigen::Index e = 0; e < extra; ++e) {
      for (Eigen::Index i = 0; i < n; ++i) A(2 * n + e, i) = 2.0 * cur.u01() - 1.0;
      b(2 * n + e) = 0.1 + cur.u01();
    }

    const QpResult r = solve_qp(H, g, A, b);
    const testutil::OracleSolution oracle = testutil::qp_oracle(H, g, A, b);
    REQUIRE(oracle.feasible);  // boxes contain the origin
    REQUIRE(r.status == QpStatus::optimal);
    CHECK(r.objective == doctest::Approx(oracle.objective).epsilon(1e-5));
    CHECK((r.x - oracle.x).cwiseAbs().maxCoeff() <= 1e-5);
    ++solved;
  }
  CHECK(solved == 200);
}

TEST_CASE("duals are nonnegative and complementary") {
  RngStream rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    RngCursor cur(rng.substream(static_cast<std::uint64_t>(trial)));
    const Eigen::Index n = 3;
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n) * (1.0 + cur.u01());
    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i) g(i) = 2.0 * cur.u01() - 1.0;
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) A(i, j) = 2.0 * cur.u01() - 1.0;
      b(i) = 0.5 * cur.u01();
    }
    const QpResult r = solve_qp(H, g, A, b);
    if (r.status != QpStatus::optimal) continue;
    const Eigen::VectorXd slack = A * r.x - b;
    for (Eigen::Index i = 0; i < n; ++i) {
      CHECK(r.dual(i) >= 0.0);
      CHECK(std::abs(r.dual(i) * slack(i)) <= 1e-7);
    }
    const Eigen::VectorXd stat = H * r.x + g + A.transpose() * r.dual;
    CHECK(stat.cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("dimension mismatches are rejected") {
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(solve_qp(H, Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Zero(0, 2),
                           Eigen::VectorXd::Zero(0)),
                  UsageError);
  CHECK_THROWS_AS(solve_qp(H, Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Zero(1, 3),
                           Eigen::VectorXd::Zero(1)),
                  UsageError);
}
