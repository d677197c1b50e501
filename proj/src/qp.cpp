#include "scmpc/qp.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "scmpc/errors.hpp"

namespace scmpc {

namespace {

constexpr double kDualTol = 1e-12;   // multiplier ratio test threshold
constexpr double kCurvatureTol = 1e-13;

Eigen::LLT<Eigen::MatrixXd> factor_with_ridge(const Eigen::MatrixXd& H) {
  Eigen::LLT<Eigen::MatrixXd> llt(H);
  if (llt.info() == Eigen::Success) return llt;
  const double scale = std::max(1.0, H.diagonal().cwiseAbs().maxCoeff());
  double ridge = 1e-12 * scale;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(H.rows(), H.cols());
  while (ridge <= 1e-4 * scale) {
    llt.compute(H + ridge * eye);
    if (llt.info() == Eigen::Success) return llt;
    ridge *= 100.0;
  }
  throw NumericalError("solve_qp: Hessian is not positive definite within ridge budget");
}

}  // namespace

QpResult solve_qp(const Eigen::MatrixXd& H, const Eigen::VectorXd& g,
                  const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                  const std::vector<std::uint8_t>* row_enabled) {
  const Eigen::Index n = H.rows();
  const Eigen::Index rows = A.rows();
  if (H.cols() != n || g.size() != n) throw UsageError("solve_qp: H/g dimensions inconsistent");
  if (rows > 0 && A.cols() != n) throw UsageError("solve_qp: A column count != variable count");
  if (b.size() != rows) throw UsageError("solve_qp: A/b row mismatch");
  if (row_enabled && static_cast<Eigen::Index>(row_enabled->size()) != rows) {
    throw UsageError("solve_qp: row mask size != row count");
  }

  const auto enabled = [&](Eigen::Index r) {
    return !row_enabled || (*row_enabled)[static_cast<std::size_t>(r)] != 0;
  };

  QpResult res;
  Eigen::LLT<Eigen::MatrixXd> llt = factor_with_ridge(H);
  res.x = -llt.solve(g);
  res.dual = Eigen::VectorXd::Zero(rows);

  std::vector<Eigen::Index> active;   // insertion order
  std::vector<double> lambda;
  std::vector<std::uint8_t> in_active(static_cast<std::size_t>(rows), 0);

  const double inf = std::numeric_limits<double>::infinity();
  const int max_iterations = 1000 + 20 * static_cast<int>(n);

  while (true) {
    // Most violated enabled inactive row; active rows sit on their boundary.
    Eigen::Index p = -1;
    double worst = 0.0;
    if (rows > 0) {
      const Eigen::VectorXd slack = A * res.x - b;
      for (Eigen::Index r = 0; r < rows; ++r) {
        if (!enabled(r) || in_active[static_cast<std::size_t>(r)]) continue;
        const double tol = 1e-9 * (1.0 + std::abs(b[r]));
        const double v = slack[r];
        if (v > tol && v > worst) {
          worst = v;
          p = r;
        }
      }
    }
    if (p < 0) break;  // primal feasible: optimal

    const Eigen::VectorXd a_p = A.row(p).transpose();
    double tau_acc = 0.0;

    while (true) {
      if (++res.iterations > max_iterations) {
        throw NumericalError("solve_qp: iteration limit exceeded (" +
                             std::to_string(max_iterations) + "), n=" + std::to_string(n) +
                             " rows=" + std::to_string(rows));
      }

      const Eigen::Index na = static_cast<Eigen::Index>(active.size());
      const Eigen::VectorXd Hinv_ap = llt.solve(a_p);
      Eigen::VectorXd r_dir(na);
      Eigen::VectorXd z;
      if (na > 0) {
        Eigen::MatrixXd AW(na, n);
        for (Eigen::Index i = 0; i < na; ++i) AW.row(i) = A.row(active[static_cast<std::size_t>(i)]);
        const Eigen::MatrixXd Hinv_AWt = llt.solve(AW.transpose());
        const Eigen::MatrixXd M = AW * Hinv_AWt;
        r_dir = M.ldlt().solve(AW * Hinv_ap);
        z = Hinv_ap - Hinv_AWt * r_dir;
      } else {
        z = Hinv_ap;
      }

      const double kappa = a_p.dot(z);
      const double vp = a_p.dot(res.x) - b[p];
      const double curv_floor = kCurvatureTol * std::max(1.0, a_p.squaredNorm());
      const double t_full = kappa > curv_floor ? vp / kappa : inf;

      double t_drop = inf;
      Eigen::Index drop_pos = -1;
      for (Eigen::Index i = 0; i < na; ++i) {
        if (r_dir[i] > kDualTol) {
          const double t = lambda[static_cast<std::size_t>(i)] / r_dir[i];
          if (t < t_drop) {
            t_drop = t;
            drop_pos = i;
          }
        }
      }

      const double t = std::min(t_full, t_drop);
      if (t == inf) {
        // Dual ray: the violated row cannot be satisfied.
        res.status = QpStatus::infeasible;
        return res;
      }

      res.x -= t * z;
      for (Eigen::Index i = 0; i < na; ++i) lambda[static_cast<std::size_t>(i)] -= t * r_dir[i];
      tau_acc += t;

      if (t == t_full && t_full <= t_drop) {
        active.push_back(p);
        lambda.push_back(tau_acc);
        in_active[static_cast<std::size_t>(p)] = 1;
        break;
      }
      in_active[static_cast<std::size_t>(active[static_cast<std::size_t>(drop_pos)])] = 0;
      active.erase(active.begin() + drop_pos);
      lambda.erase(lambda.begin() + drop_pos);
    }
  }

  for (std::size_t i = 0; i < active.size(); ++i) {
    res.dual[active[i]] = std::max(0.0, lambda[i]);
  }
  res.active_rows = active;
  res.objective = 0.5 * res.x.dot(H * res.x) + g.dot(res.x);
  res.status = QpStatus::optimal;
  return res;
}

}  // namespace scmpc
