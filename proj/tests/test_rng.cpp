#include <doctest.h>

#include <cmath>
#include <vector>

#include "scmpc/distributions.hpp"
#include "scmpc/errors.hpp"
#include "scmpc/rng.hpp"

using namespace scmpc;

TEST_CASE("same seed reproduces the same stream bit for bit") {
  RngStream a(42);
  RngStream b(42);
  for (std::uint64_t i = 0; i < 100; ++i) {
    CHECK(a.bits(i) == b.bits(i));
    CHECK(a.substream(7).bits(i) == b.substream(7).bits(i));
  }
}

TEST_CASE("substreams are distinct from each other and the parent") {
  RngStream root(1);
  CHECK(root.substream(0).key() != root.substream(1).key());
  CHECK(root.substream(0).key() != root.key());
  CHECK(root.substream(0).substream(1).key() != root.substream(1).substream(0).key());
}

TEST_CASE("uniform draws live in [0, 1) with the expected mean") {
  RngStream s(2024);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform01(static_cast<std::uint64_t>(i));
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  const double mean = sum / n;
  CHECK(mean > 0.497);
  CHECK(mean < 0.503);
}

TEST_CASE("normal(0, 0.1) samples reproduce the declared variance") {
  RngCursor rng(RngStream(99));
  const ScalarDist dist = ScalarDist::normal(0.0, 0.1);
  const int n = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = dist.sample(rng);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(var > 0.097);
  CHECK(var < 0.103);
}

TEST_CASE("independently seeded sample means agree within 4 sigma") {
  const ScalarDist dist = ScalarDist::uniform(0.0, 1.0);
  const int n = 50000;
  const auto mean_for = [&](std::uint64_t seed) {
    RngCursor rng{RngStream(seed)};
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += dist.sample(rng);
    return sum / n;
  };
  const double sigma = std::sqrt(dist.variance());
  CHECK(std::abs(mean_for(11) - mean_for(12)) <= 4.0 * sigma / std::sqrt(double(n)));
}

TEST_CASE("degenerate distributions are point masses") {
  RngCursor rng(RngStream(5));
  CHECK(ScalarDist::uniform(3.0, 3.0).sample(rng) == 3.0);
  CHECK(ScalarDist::normal(-1.5, 0.0).sample(rng) == -1.5);
  CHECK(ScalarDist::constant(0.0).degenerate());
}

TEST_CASE("invalid distribution parameters are rejected") {
  CHECK_THROWS_AS(ScalarDist::uniform(1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(ScalarDist::normal(0.0, -0.1), ConfigError);
}

TEST_CASE("normal cdf matches known quantiles") {
  const ScalarDist d = ScalarDist::normal(0.0, 1.0);
  CHECK(d.cdf(0.0) == doctest::Approx(0.5));
  CHECK(d.cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
  const ScalarDist u = ScalarDist::uniform(0.0, 2.0);
  CHECK(u.cdf(0.5) == doctest::Approx(0.25));
  CHECK(u.cdf(-1.0) == 0.0);
  CHECK(u.cdf(3.0) == 1.0);
}
