#pragma once

#include <Eigen/Dense>
#include <vector>

#include "scmpc/distributions.hpp"
#include "scmpc/polytope.hpp"
#include "scmpc/rng.hpp"

namespace scmpc {

// One draw of all uncertain influences acting on the system at a single
// time step: the matrix parameters theta and the additive noise vector.
struct UncertaintySample {
  Eigen::VectorXd theta;
  Eigen::VectorXd noise;
};

// The affine transition map induced by one uncertainty sample:
// x+ = A x + B u + w.
struct SystemRealization {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::VectorXd w;
};

// Uncertain linear system with matrices affine in a random parameter vector,
//   A(theta) = A0 + sum_j theta_j * A_j,   B(theta) = B0 + sum_j theta_j * B_j,
// plus independent additive noise per state component. Immutable after
// construction; sampling is pure given an explicit rng state.
class SystemModel {
 public:
  SystemModel(Eigen::MatrixXd A0, std::vector<Eigen::MatrixXd> A_terms,
              Eigen::MatrixXd B0, std::vector<Eigen::MatrixXd> B_terms,
              std::vector<ScalarDist> parameter_dists,
              std::vector<ScalarDist> noise_dists);

  [[nodiscard]] Eigen::Index state_dim() const { return A0_.rows(); }
  [[nodiscard]] Eigen::Index input_dim() const { return B0_.cols(); }
  [[nodiscard]] Eigen::Index parameter_dim() const
      { return static_cast<Eigen::Index>(parameter_dists_.size()); }

  // True iff any parameter-dependent matrix term is nonzero, i.e. the
  // uncertainty is multiplicative and not purely additive.
  [[nodiscard]] bool is_multiplicative() const { return multiplicative_; }

  UncertaintySample draw(RngCursor& rng) const;
  [[nodiscard]] SystemRealization realize(const UncertaintySample& sample) const;
  SystemRealization sample_realization(RngCursor& rng) const { return realize(draw(rng)); }

  [[nodiscard]] const Eigen::MatrixXd& A0() const { return A0_; }
  [[nodiscard]] const Eigen::MatrixXd& B0() const { return B0_; }
  [[nodiscard]] const std::vector<Eigen::MatrixXd>& A_terms() const { return A_terms_; }
  [[nodiscard]] const std::vector<Eigen::MatrixXd>& B_terms() const { return B_terms_; }
  [[nodiscard]] const std::vector<ScalarDist>& parameter_dists() const { return parameter_dists_; }
  [[nodiscard]] const std::vector<ScalarDist>& noise_dists() const { return noise_dists_; }

 private:
  Eigen::MatrixXd A0_;
  std::vector<Eigen::MatrixXd> A_terms_;
  Eigen::MatrixXd B0_;
  std::vector<Eigen::MatrixXd> B_terms_;
  std::vector<ScalarDist> parameter_dists_;
  std::vector<ScalarDist> noise_dists_;
  bool multiplicative_;
};

// Full-horizon uncertainty sample: one realization per prediction stage
// i = 0..N-1.
using Scenario = std::vector<SystemRealization>;

// Draws K i.i.d. scenarios of length N. Realization (k, i) is generated on
// stream.substream(k).substream(i), so calls with the same stream are
// bit-reproducible and scenarios can be regenerated independently.
std::vector<Scenario> sample_scenarios(const SystemModel& model, int K, int N,
                                       const RngStream& stream);

// Quadratic stage cost l(x, u) = |Qw x|^2 + |Rw u|^2 with symmetric PSD
// weights, stored as the weighting matrices (not their squares).
class StageCost {
 public:
  StageCost(Eigen::MatrixXd state_weight, Eigen::MatrixXd input_weight);

  [[nodiscard]] double value(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;

  [[nodiscard]] const Eigen::MatrixXd& state_weight() const { return Qw_; }
  [[nodiscard]] const Eigen::MatrixXd& input_weight() const { return Rw_; }
  // Quadratic forms Qw'Qw and Rw'Rw used by the condensed program.
  [[nodiscard]] const Eigen::MatrixXd& state_quad() const { return Qq_; }
  [[nodiscard]] const Eigen::MatrixXd& input_quad() const { return Rq_; }
  [[nodiscard]] double max_eigenvalue() const { return max_eig_; }

 private:
  Eigen::MatrixXd Qw_, Rw_, Qq_, Rq_;
  double max_eig_;
};

// A state constraint set X_j together with its violation level epsilon and
// the support-rank bound used for sample-size selection. The bound may be
// overridden downward by callers that know tighter structure.
struct ChanceConstraintSpec {
  ChanceConstraintSpec(Polytope set, double epsilon, int rho1_bound);

  Polytope set;
  double epsilon;
  int rho1_bound;
};

}  // namespace scmpc
