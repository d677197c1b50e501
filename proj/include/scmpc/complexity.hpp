#pragma once

#include "scmpc/model.hpp"
#include "scmpc/polytope.hpp"

namespace scmpc {

// Numerical tolerances of the sample-complexity routines. Admissibility
// comparisons grant the bound a grace equal to the quadrature tolerance so
// that pairs sitting exactly on the level (e.g. bound 2/20 at epsilon 0.1)
// are classified by their exact value rather than by integration noise.
inline constexpr double kBoundQuadratureTol = 1e-8;
inline constexpr double kAdmissibilityGrace = kBoundQuadratureTol;

// Partial binomial sum  B(nu; K, q) = sum_{j=0}^{q} C(K,j) nu^j (1-nu)^(K-j),
// the beta distribution function. Terms are assembled in log space
// (log-gamma binomials) and added with compensated summation.
double beta_tail(double nu, long K, long q);

// Distribution bound U_{K,R,rho1}(nu) = min{1, C(R+rho1-1, R) B(nu; K, R+rho1-1)}.
// The product is formed in log space so the binomial coefficient may exceed
// the double range.
double violation_bound(double nu, long K, long R, long rho1);

// Expected first-step violation bound: the integral of U_{K,R,rho1} over
// [0,1]. The saturation plateau (where U = 1) is located by bisection and
// integrated exactly; adaptive Simpson handles the remainder to
// kBoundQuadratureTol. For R = 0 the value agrees with the closed form
// rho1/(K+1) to well within 1e-6.
double expected_violation_bound(long K, long R, long rho1);

// Smallest K whose expected violation bound is <= epsilon (+ grace), found
// by exponential ramp-up and bisection over the bound, which decreases
// monotonically in K.
long min_sample_size(long R, long rho1, double epsilon);

// A sample size K with removal count R evaluated against a target level.
struct SampleRemovalPair {
  long sample_size;
  long removal_count;
  int rho1;
  double epsilon;
  double expected_violation;

  [[nodiscard]] bool admissible() const {
    return expected_violation <= epsilon + kAdmissibilityGrace;
  }
};

SampleRemovalPair evaluate_pair(long K, long R, int rho1, double epsilon);

// Support-rank bound of a state constraint in the scenario program:
// min(m, rank H) with the rank of the constraint normals taken at threshold
// 1e-10 * sigma_max. A constraint with no rows (or rank 0) is vacuous; the
// minimal valid bound 1 is returned with the flag set.
struct SupportRankBound {
  int rho1;
  bool vacuous;
};

SupportRankBound support_rank_bound(const SystemModel& model, const Polytope& constraint, int N);

}  // namespace scmpc
