#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "speclab/fit.hpp"

using namespace speclab;

TEST_CASE("exact line recovered with zero residual") {
  std::vector<std::pair<double, double>> pts;
  for (double x : {0.0, 1.0, 2.0, 5.0}) pts.emplace_back(x, 2.0 * x + 1.0);
  auto f = fit_slope(pts);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.max_residual <= 1e-12);
}

TEST_CASE("exact power law in log-log") {
  std::vector<double> lam = {16.0, 64.0, 256.0};
  std::vector<double> val;
  for (double l : lam) val.push_back(std::pow(l, 0.25));
  auto f = fit_loglog(lam, val);
  CHECK(f.slope == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(f.max_residual <= 1e-12);
}

TEST_CASE("rejects degenerate input") {
  CHECK_THROWS(fit_slope({{1.0, 2.0}, {2.0, 3.0}}));
  CHECK_THROWS(fit_slope({{1.0, 2.0}, {1.0, 3.0}, {1.0, 4.0}}));
  CHECK_THROWS(fit_loglog({1.0, 2.0, 3.0}, {1.0, -2.0, 3.0}));
}

TEST_CASE("residuals reported for noisy data") {
  std::vector<std::pair<double, double>> pts = {
      {0.0, 0.1}, {1.0, 0.9}, {2.0, 2.1}, {3.0, 2.9}};
  auto f = fit_slope(pts);
  CHECK(f.slope == doctest::Approx(0.98).epsilon(0.05));
  CHECK(f.max_residual > 0.0);
}
