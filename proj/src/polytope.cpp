#include "scmpc/polytope.hpp"

#include <string>
#include <utility>

#include "scmpc/errors.hpp"

namespace scmpc {

Polytope::Polytope(Eigen::MatrixXd H, Eigen::VectorXd h)
    : H_(std::move(H)), h_(std::move(h)), dim_(H_.cols()) {
  if (H_.rows() != h_.size()) {
    throw UsageError("polytope: H has " + std::to_string(H_.rows()) + " rows but h has " +
                     std::to_string(h_.size()) + " entries");
  }
}

Polytope Polytope::full_space(Eigen::Index dim) {
  return {Eigen::MatrixXd::Zero(0, dim), Eigen::VectorXd::Zero(0)};
}

Polytope Polytope::box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  if (lo.size() != hi.size()) throw UsageError("polytope box: lo/hi dimension mismatch");
  const Eigen::Index d = lo.size();
  Eigen::MatrixXd H(2 * d, d);
  Eigen::VectorXd h(2 * d);
  H.topRows(d) = Eigen::MatrixXd::Identity(d, d);
  H.bottomRows(d) = -Eigen::MatrixXd::Identity(d, d);
  h.head(d) = hi;
  h.tail(d) = -lo;
  return {std::move(H), std::move(h)};
}

bool Polytope::contains(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != dim_) {
    throw UsageError("polytope membership: point dimension " + std::to_string(x.size()) +
                     " != polytope dimension " + std::to_string(dim_));
  }
  if (H_.rows() == 0) return true;
  return ((H_ * x - h_).array() <= tol).all();
}

Polytope Polytope::intersect(const Polytope& other) const {
  if (other.dim_ != dim_) throw UsageError("polytope intersect: dimension mismatch");
  Eigen::MatrixXd H(H_.rows() + other.H_.rows(), dim_);
  Eigen::VectorXd h(h_.size() + other.h_.size());
  H << H_, other.H_;
  h << h_, other.h_;
  return {std::move(H), std::move(h)};
}

}  // namespace scmpc
