#pragma once

#include <Eigen/Dense>

namespace scmpc {

// Convex polyhedron in halfspace form {x : H x <= h}. A zero-row H
// represents the full space (vacuous constraint). Membership uses an
// absolute boundary tolerance; violations are counted strictly outside it.
class Polytope {
 public:
  static constexpr double kBoundaryTol = 1e-9;

  Polytope(Eigen::MatrixXd H, Eigen::VectorXd h);  // throws UsageError on row mismatch

  static Polytope full_space(Eigen::Index dim);
  // Axis-aligned box {lo <= x <= hi}, two rows per coordinate.
  static Polytope box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

  [[nodiscard]] bool contains(const Eigen::VectorXd& x, double tol = kBoundaryTol) const;

  // Stacks this polytope's rows with another's (same dimension).
  [[nodiscard]] Polytope intersect(const Polytope& other) const;

  [[nodiscard]] Eigen::Index dim() const { return dim_; }
  [[nodiscard]] Eigen::Index num_rows() const { return H_.rows(); }
  [[nodiscard]] const Eigen::MatrixXd& normals() const { return H_; }
  [[nodiscard]] const Eigen::VectorXd& offsets() const { return h_; }

 private:
  Eigen::MatrixXd H_;
  Eigen::VectorXd h_;
  Eigen::Index dim_;
};

}  // namespace scmpc
