#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "speclab/calderon.hpp"
#include "speclab/grid.hpp"

using namespace speclab;
using namespace speclab::kern;

TEST_CASE("unweighted norm is the kernel's integral pi") {
  // FT of 1/(1+r^2) is pi e^{-|xi|}; max multiplier = pi
  for (double len : {200.0, 400.0}) {
    const double v = unweighted_conv_norm(len, 4096);
    CHECK(v == doctest::Approx(kPi).epsilon(1e-3));
  }
}

TEST_CASE("weight generator satisfies the hypotheses") {
  const double len = 200.0;
  const int n = 2048;
  for (std::uint64_t seed : {1u, 2u, 3u, 17u}) {
    auto w = random_lipschitz_weight(len, n, seed);
    double mn = 1e300, mx = 0.0;
    for (double v : w) {
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    CHECK(mn >= 1.0);
    CHECK(mx <= 101.0 + len);
    // hypotheses verified inside the check itself
    auto res = calderon_weighted_check(w, len, 2, seed + 100);
    CHECK(res.ratio > 0.0);
  }
  // violations rejected
  std::vector<double> bad(n, 0.5);
  CHECK_THROWS(calderon_weighted_check(bad, len, 1, 1));
  std::vector<double> jump(n, 2.0);
  jump[100] = 90.0;
  CHECK_THROWS(calderon_weighted_check(jump, len, 1, 1));
}

TEST_CASE("M == 1 ratio bounded by the multiplier norm") {
  const double len = 200.0;
  const int n = 2048;
  std::vector<double> one(n, 1.0);
  auto res = calderon_weighted_check(one, len, 8, 5);
  CHECK(res.ratio <= res.unweighted * (1.0 + 1e-12));
}

TEST_CASE("M = 1 + |r| stays within 3x the unweighted norm") {
  const double len = 200.0;
  const int n = 2048;
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    double r = i * len / n;
    if (r >= len / 2) r -= len;
    w[i] = 1.0 + std::min(std::abs(r), len / 2.0 - std::abs(r) + len / 4.0);
  }
  // make it periodic-Lipschitz: tent shape
  for (int i = 0; i < n; ++i) {
    double r = i * len / n;
    if (r >= len / 2) r -= len;
    w[i] = 1.0 + (len / 4.0 - std::abs(std::abs(r) - len / 4.0));
  }
  auto res = calderon_weighted_check(w, len, 8, 9);
  CHECK(res.ratio <= 3.0 * res.unweighted);
}

TEST_CASE("sweep over random weights: uniform bound, length independent") {
  for (double len : {200.0, 400.0}) {
    const int n = len > 300 ? 4096 : 2048;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      auto w = random_lipschitz_weight(len, n, seed);
      auto res = calderon_weighted_check(w, len, 3, 1000 + seed);
      worst = std::max(worst, res.ratio);
    }
    CHECK(worst <= 10.0 * kPi);
  }
}
