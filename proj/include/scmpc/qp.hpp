#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace scmpc {

enum class QpStatus { optimal, infeasible };

struct QpResult {
  Eigen::VectorXd x;
  Eigen::VectorXd dual;  // one multiplier per row of A; zero at inactive or disabled rows
  double objective = 0.0;  // 1/2 x'Hx + g'x
  QpStatus status = QpStatus::optimal;
  int iterations = 0;
  std::vector<Eigen::Index> active_rows;
};

// Solves  min 1/2 x'Hx + g'x  s.t.  A x <= b  by a dual active-set method
// (Goldfarb-Idnani). Starts from the unconstrained minimizer and adds the
// most violated row until primal feasible, taking partial steps that drop
// blocking rows when a multiplier would turn negative. H must be positive
// definite; if its factorization fails an escalating ridge is applied (the
// caller's KKT check still guards the final accuracy).
//
// row_enabled, when given, masks rows out of the problem entirely
// (disabled rows get zero duals). Infeasibility is detected as an
// unbounded dual ray and reported via status, never by exception.
QpResult solve_qp(const Eigen::MatrixXd& H, const Eigen::VectorXd& g,
                  const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                  const std::vector<std::uint8_t>* row_enabled = nullptr);

}  // namespace scmpc
