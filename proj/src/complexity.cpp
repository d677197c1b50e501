#include "scmpc/complexity.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "scmpc/errors.hpp"
#include "scmpc/quadrature.hpp"

namespace scmpc {

namespace {

constexpr double kLogUnderflow = -746.0;  // below this exp() is exactly 0

// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }

  [[nodiscard]] double value() const { return sum + comp; }
};

// log C(n, k) as a compensated sum of log((n-k+i)/i); exact enough for the
// coefficient magnitudes used here (absolute error ~ k * log(n) * eps).
double log_binomial(long n, long k) {
  if (k < 0 || k > n) throw UsageError("log_binomial: need 0 <= k <= n");
  k = std::min(k, n - k);
  CompensatedSum acc;
  for (long i = 1; i <= k; ++i) {
    acc.add(std::log(static_cast<double>(n - k + i) / static_cast<double>(i)));
  }
  return acc.value();
}

void check_beta_tail_args(double nu, long K, long q) {
  if (q < 0 || q > K) {
    throw UsageError("beta_tail: need 0 <= q <= K, got q=" + std::to_string(q) +
                     " K=" + std::to_string(K));
  }
  if (!(nu >= 0.0 && nu <= 1.0)) {
    throw UsageError("beta_tail: nu must lie in [0, 1], got " + std::to_string(nu));
  }
}

// Streaming log-sum-exp over the log-terms of the partial binomial sum.
// Returns -inf when every term underflows.
double beta_tail_log(double nu, long K, long q) {
  check_beta_tail_args(nu, K, q);
  if (q == K) return 0.0;
  if (nu == 0.0) return 0.0;
  if (nu == 1.0) return -std::numeric_limits<double>::infinity();

  const double log_nu = std::log(nu);
  const double log_1m = std::log1p(-nu);
  double max_log = -std::numeric_limits<double>::infinity();
  CompensatedSum scaled;
  CompensatedSum log_comb;  // log C(K, j), advanced incrementally in j
  for (long j = 0; j <= q; ++j) {
    if (j > 0) {
      log_comb.add(std::log(static_cast<double>(K - j + 1) / static_cast<double>(j)));
    }
    const double lj = log_comb.value() + static_cast<double>(j) * log_nu +
                      static_cast<double>(K - j) * log_1m;
    if (lj > max_log) {
      scaled.sum = scaled.value() * std::exp(max_log - lj);
      scaled.comp = 0.0;
      scaled.add(1.0);
      max_log = lj;
    } else {
      scaled.add(std::exp(lj - max_log));
    }
  }
  if (!std::isfinite(max_log)) return -std::numeric_limits<double>::infinity();
  return max_log + std::log(scaled.value());
}

}  // namespace

double beta_tail(double nu, long K, long q) {
  check_beta_tail_args(nu, K, q);
  if (q == K) return 1.0;  // full binomial sum
  if (nu == 0.0) return 1.0;
  if (nu == 1.0) return 0.0;

  const double log_nu = std::log(nu);
  const double log_1m = std::log1p(-nu);
  CompensatedSum terms;
  CompensatedSum log_comb;
  for (long j = 0; j <= q; ++j) {
    if (j > 0) {
      log_comb.add(std::log(static_cast<double>(K - j + 1) / static_cast<double>(j)));
    }
    const double lj = log_comb.value() + static_cast<double>(j) * log_nu +
                      static_cast<double>(K - j) * log_1m;
    if (lj >= kLogUnderflow) terms.add(std::exp(lj));
  }
  return std::min(1.0, std::max(0.0, terms.value()));
}

double violation_bound(double nu, long K, long R, long rho1) {
  if (R < 0 || rho1 < 1) throw UsageError("violation_bound: need R >= 0 and rho1 >= 1");
  if (K < R + rho1) {
    throw UsageError("violation_bound: need K >= R + rho1, got K=" + std::to_string(K) +
                     " R=" + std::to_string(R) + " rho1=" + std::to_string(rho1));
  }
  const double log_u = log_binomial(R + rho1 - 1, R) + beta_tail_log(nu, K, R + rho1 - 1);
  if (log_u >= 0.0) return 1.0;
  if (log_u < kLogUnderflow) return 0.0;
  return std::exp(log_u);
}

double expected_violation_bound(long K, long R, long rho1) {
  if (R < 0 || rho1 < 1) throw UsageError("expected_violation_bound: need R >= 0 and rho1 >= 1");
  if (K < R + rho1) {
    throw UsageError("expected_violation_bound: need K >= R + rho1, got K=" + std::to_string(K) +
                     " R=" + std::to_string(R) + " rho1=" + std::to_string(rho1));
  }
  const long q = R + rho1 - 1;
  const double log_c = log_binomial(R + rho1 - 1, R);

  // U equals 1 on a plateau [0, kink] before the beta tail decays below 1/c.
  // Adaptive rules converge slowly across that corner, so it is located by
  // bisection and integrated exactly.
  double kink = 0.0;
  if (log_c > 0.0) {
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > 1e-15) {
      const double mid = 0.5 * (lo + hi);
      if (log_c + beta_tail_log(mid, K, q) >= 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    kink = lo;
  }

  const auto integrand = [&](double nu) { return violation_bound(nu, K, R, rho1); };
  return kink + adaptive_simpson(integrand, kink, 1.0, kBoundQuadratureTol);
}

long min_sample_size(long R, long rho1, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw UsageError("min_sample_size: epsilon must lie in (0, 0.5), got " +
                     std::to_string(epsilon));
  }
  if (R < 0 || rho1 < 1) throw UsageError("min_sample_size: need R >= 0 and rho1 >= 1");

  const auto admissible = [&](long K) {
    return expected_violation_bound(K, R, rho1) <= epsilon + kAdmissibilityGrace;
  };

  const long floor = R + rho1;
  if (admissible(floor)) return floor;

  long hi = floor;
  do {
    if (hi > (1L << 40)) {
      throw NumericalError("min_sample_size: no admissible K below 2^40 for R=" +
                           std::to_string(R) + " rho1=" + std::to_string(rho1) +
                           " epsilon=" + std::to_string(epsilon));
    }
    hi *= 2;
  } while (!admissible(hi));

  long lo = std::max(floor, hi / 2);  // inadmissible
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (admissible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

SampleRemovalPair evaluate_pair(long K, long R, int rho1, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw ConfigError("sample-removal pair: epsilon must lie in (0, 0.5), got " +
                      std::to_string(epsilon));
  }
  if (K < R + rho1) {
    throw ConfigError("sample-removal pair: need K >= rho1 + R, got K=" + std::to_string(K) +
                      " R=" + std::to_string(R) + " rho1=" + std::to_string(rho1));
  }
  return {K, R, rho1, epsilon, expected_violation_bound(K, R, rho1)};
}

SupportRankBound support_rank_bound(const SystemModel& model, const Polytope& constraint,
                                    int N) {
  if (constraint.dim() != model.state_dim()) {
    throw UsageError("support_rank_bound: constraint dimension does not match the state");
  }
  if (N < 1) throw UsageError("support_rank_bound: need N >= 1");
  if (constraint.num_rows() == 0) return {1, true};

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraint.normals());
  const auto& sv = svd.singularValues();
  const double threshold = 1e-10 * sv(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) ++rank;
  }
  if (rank == 0) return {1, true};

  // The first predicted state reaches the constraint only through
  // P B(delta), whose rank is at most min(rank H, m) for every uncertainty
  // outcome; a single halfspace is the rank-1 instance.
  const int m = static_cast<int>(model.input_dim());
  return {std::min(m, rank), false};
}

}  // namespace scmpc
