#pragma once

#include "scmpc/rng.hpp"

namespace scmpc {

// Scalar distribution for uncertainty parameters and additive noise
// components. Normal distributions are parameterized by mean and VARIANCE.
// Zero-width supports (uniform(a,a), variance 0) are allowed and produce
// point masses; they are used for deterministic test systems.
class ScalarDist {
 public:
  enum class Kind { uniform, normal };

  static ScalarDist uniform(double a, double b);          // throws ConfigError if a > b
  static ScalarDist normal(double mean, double variance); // throws ConfigError if variance < 0
  static ScalarDist constant(double value) { return uniform(value, value); }

  double sample(RngCursor& rng) const;
  [[nodiscard]] double cdf(double x) const;

  [[nodiscard]] double mean() const;
  [[nodiscard]] double variance() const;
  [[nodiscard]] bool degenerate() const;
  [[nodiscard]] Kind kind() const { return kind_; }

  // Distribution parameters as declared: (a, b) for uniform,
  // (mean, variance) for normal.
  [[nodiscard]] double param1() const { return p1_; }
  [[nodiscard]] double param2() const { return p2_; }

 private:
  ScalarDist(Kind kind, double p1, double p2) : kind_(kind), p1_(p1), p2_(p2) {}

  Kind kind_;
  double p1_;
  double p2_;
};

}  // namespace scmpc
