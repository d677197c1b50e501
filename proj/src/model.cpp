#include "scmpc/model.hpp"

#include <string>
#include <utility>

#include "scmpc/errors.hpp"

namespace scmpc {

namespace {

void require_same_shape(const Eigen::MatrixXd& ref, const std::vector<Eigen::MatrixXd>& terms,
                        const char* name) {
  for (const auto& t : terms) {
    if (t.rows() != ref.rows() || t.cols() != ref.cols()) {
      throw ConfigError(std::string("system model: ") + name +
                        " term shape does not match the constant template");
    }
  }
}

bool any_nonzero(const std::vector<Eigen::MatrixXd>& terms) {
  for (const auto& t : terms) {
    if (t.cwiseAbs().maxCoeff() != 0.0) return true;
  }
  return false;
}

}  // namespace

SystemModel::SystemModel(Eigen::MatrixXd A0, std::vector<Eigen::MatrixXd> A_terms,
                         Eigen::MatrixXd B0, std::vector<Eigen::MatrixXd> B_terms,
                         std::vector<ScalarDist> parameter_dists,
                         std::vector<ScalarDist> noise_dists)
    : A0_(std::move(A0)),
      A_terms_(std::move(A_terms)),
      B0_(std::move(B0)),
      B_terms_(std::move(B_terms)),
      parameter_dists_(std::move(parameter_dists)),
      noise_dists_(std::move(noise_dists)) {
  if (A0_.rows() != A0_.cols()) throw ConfigError("system model: A0 must be square");
  if (B0_.rows() != A0_.rows()) throw ConfigError("system model: B0 row count must equal state dimension");
  require_same_shape(A0_, A_terms_, "A");
  require_same_shape(B0_, B_terms_, "B");
  const auto p = parameter_dists_.size();
  if (A_terms_.size() != p || B_terms_.size() != p) {
    throw ConfigError("system model: need one A term and one B term per parameter distribution (" +
                      std::to_string(p) + " parameters, " + std::to_string(A_terms_.size()) +
                      " A terms, " + std::to_string(B_terms_.size()) + " B terms)");
  }
  if (static_cast<Eigen::Index>(noise_dists_.size()) != A0_.rows()) {
    throw ConfigError("system model: need one noise distribution per state component");
  }
  multiplicative_ = any_nonzero(A_terms_) || any_nonzero(B_terms_);
}

UncertaintySample SystemModel::draw(RngCursor& rng) const {
  UncertaintySample s;
  s.theta.resize(parameter_dim());
  for (Eigen::Index j = 0; j < s.theta.size(); ++j) {
    s.theta[j] = parameter_dists_[static_cast<std::size_t>(j)].sample(rng);
  }
  s.noise.resize(state_dim());
  for (Eigen::Index i = 0; i < s.noise.size(); ++i) {
    s.noise[i] = noise_dists_[static_cast<std::size_t>(i)].sample(rng);
  }
  return s;
}

SystemRealization SystemModel::realize(const UncertaintySample& sample) const {
  if (sample.theta.size() != parameter_dim() || sample.noise.size() != state_dim()) {
    throw UsageError("system model: uncertainty sample dimensions do not match the model");
  }
  SystemRealization r{A0_, B0_, sample.noise};
  for (Eigen::Index j = 0; j < sample.theta.size(); ++j) {
    const auto ju = static_cast<std::size_t>(j);
    r.A += sample.theta[j] * A_terms_[ju];
    r.B += sample.theta[j] * B_terms_[ju];
  }
  return r;
}

std::vector<Scenario> sample_scenarios(const SystemModel& model, int K, int N,
                                       const RngStream& stream) {
  if (K < 1 || N < 1) throw UsageError("sample_scenarios: need K >= 1 and N >= 1");
  std::vector<Scenario> scenarios(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const RngStream scenario_stream = stream.substream(static_cast<std::uint64_t>(k));
    Scenario& scenario = scenarios[static_cast<std::size_t>(k)];
    scenario.reserve(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
      RngCursor cursor(scenario_stream.substream(static_cast<std::uint64_t>(i)));
      scenario.push_back(model.sample_realization(cursor));
    }
  }
  return scenarios;
}

namespace {

// Symmetry plus eigenvalues >= -1e-10, the PSD acceptance band.
void require_psd(const Eigen::MatrixXd& M, const char* name) {
  if (M.rows() != M.cols()) throw ConfigError(std::string("stage cost: ") + name + " must be square");
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ConfigError(std::string("stage cost: ") + name + " must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10 * scale) {
    throw ConfigError(std::string("stage cost: ") + name + " must be positive semidefinite");
  }
}

}  // namespace

StageCost::StageCost(Eigen::MatrixXd state_weight, Eigen::MatrixXd input_weight)
    : Qw_(std::move(state_weight)), Rw_(std::move(input_weight)) {
  require_psd(Qw_, "Q");
  require_psd(Rw_, "R");
  Qq_ = Qw_.transpose() * Qw_;
  Rq_ = Rw_.transpose() * Rw_;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> q(Qq_, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> r(Rq_, Eigen::EigenvaluesOnly);
  max_eig_ = std::max(q.eigenvalues().maxCoeff(), r.eigenvalues().maxCoeff());
}

double StageCost::value(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
  if (x.size() != Qw_.cols() || u.size() != Rw_.cols()) {
    throw UsageError("stage cost: state/input dimensions do not match the weights");
  }
  return (Qw_ * x).squaredNorm() + (Rw_ * u).squaredNorm();
}

ChanceConstraintSpec::ChanceConstraintSpec(Polytope set_in, double epsilon_in, int rho1_bound_in)
    : set(std::move(set_in)), epsilon(epsilon_in), rho1_bound(rho1_bound_in) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw ConfigError("chance constraint: epsilon must lie in (0, 0.5), got " +
                      std::to_string(epsilon));
  }
  if (rho1_bound < 1) {
    throw ConfigError("chance constraint: support-rank bound must be >= 1, got " +
                      std::to_string(rho1_bound));
  }
}

}  // namespace scmpc
