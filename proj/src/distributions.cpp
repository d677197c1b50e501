#include "scmpc/distributions.hpp"

#include <cmath>
#include <string>

#include "scmpc/errors.hpp"

namespace scmpc {

ScalarDist ScalarDist::uniform(double a, double b) {
  if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ConfigError("uniform distribution requires finite a <= b, got a=" +
                      std::to_string(a) + " b=" + std::to_string(b));
  }
  return {Kind::uniform, a, b};
}

ScalarDist ScalarDist::normal(double mean, double variance) {
  if (!(variance >= 0.0) || !std::isfinite(mean) || !std::isfinite(variance)) {
    throw ConfigError("normal distribution requires finite mean and variance >= 0, got mean=" +
                      std::to_string(mean) + " variance=" + std::to_string(variance));
  }
  return {Kind::normal, mean, variance};
}

double ScalarDist::sample(RngCursor& rng) const {
  switch (kind_) {
    case Kind::uniform:
      return p1_ + (p2_ - p1_) * rng.u01();
    case Kind::normal:
      // Draw even for degenerate variance so the counter layout does not
      // depend on parameter values.
      return p1_ + std::sqrt(p2_) * rng.normal01();
  }
  return p1_;
}

double ScalarDist::cdf(double x) const {
  switch (kind_) {
    case Kind::uniform: {
      if (degenerate()) return x < p1_ ? 0.0 : 1.0;
      if (x <= p1_) return 0.0;
      if (x >= p2_) return 1.0;
      return (x - p1_) / (p2_ - p1_);
    }
    case Kind::normal: {
      if (degenerate()) return x < p1_ ? 0.0 : 1.0;
      const double z = (x - p1_) / std::sqrt(2.0 * p2_);
      return 0.5 * std::erfc(-z);
    }
  }
  return 0.0;
}

double ScalarDist::mean() const { return kind_ == Kind::uniform ? 0.5 * (p1_ + p2_) : p1_; }

double ScalarDist::variance() const {
  if (kind_ == Kind::uniform) {
    const double w = p2_ - p1_;
    return w * w / 12.0;
  }
  return p2_;
}

bool ScalarDist::degenerate() const { return variance() == 0.0; }

}  // namespace scmpc
