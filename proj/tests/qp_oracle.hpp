#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

// Brute-force QP oracle: enumerates every active set of size <= n, solves
// the equality-constrained KKT system, and keeps the best feasible
// dual-nonnegative candidate. Exact for small strictly convex programs.
namespace testutil {

struct OracleSolution {
  Eigen::VectorXd x;
  double objective = std::numeric_limits<double>::infinity();
  bool feasible = false;
};

inline OracleSolution qp_oracle(const Eigen::MatrixXd& H, const Eigen::VectorXd& g,
                                const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                double tol = 1e-9) {
  const Eigen::Index n = H.rows();
  const Eigen::Index rows = A.rows();
  OracleSolution best;

  const auto consider = [&](const std::vector<Eigen::Index>& active) {
    const auto na = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXd KKT = Eigen::MatrixXd::Zero(n + na, n + na);
    KKT.topLeftCorner(n, n) = H;
    Eigen::VectorXd rhs(n + na);
    rhs.head(n) = -g;
    for (Eigen::Index i = 0; i < na; ++i) {
      KKT.block(n + i, 0, 1, n) = A.row(active[static_cast<std::size_t>(i)]);
      KKT.block(0, n + i, n, 1) = A.row(active[static_cast<std::size_t>(i)]).transpose();
      rhs(n + i) = b(active[static_cast<std::size_t>(i)]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(KKT);
    if (!lu.isInvertible()) return;
    const Eigen::VectorXd sol = lu.solve(rhs);
    const Eigen::VectorXd x = sol.head(n);
    for (Eigen::Index i = 0; i < na; ++i) {
      if (sol(n + i) < -tol) return;  // negative multiplier
    }
    if (rows > 0 && ((A * x - b).array() > tol).any()) return;
    const double obj = 0.5 * x.dot(H * x) + g.dot(x);
    if (!best.feasible || obj < best.objective) {
      best.feasible = true;
      best.objective = obj;
      best.x = x;
    }
  };

  std::vector<Eigen::Index> subset;
  const auto recurse = [&](auto&& self, Eigen::Index start) -> void {
    consider(subset);
    if (static_cast<Eigen::Index>(subset.size()) == n) return;
    for (Eigen::Index r = start; r < rows; ++r) {
      subset.push_back(r);
      self(self, r + 1);
      subset.pop_back();
    }
  };
  recurse(recurse, 0);
  return best;
}

}  // namespace testutil
