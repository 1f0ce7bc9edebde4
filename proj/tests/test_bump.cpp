#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "speclab/bump.hpp"

using namespace speclab;

TEST_CASE("step endpoints and monotonicity") {
  CHECK(bump::step(-1.0) == 0.0);
  CHECK(bump::step(0.0) == 0.0);
  CHECK(bump::step(1.0) == 1.0);
  CHECK(bump::step(2.0) == 1.0);
  CHECK(bump::step(0.5) == doctest::Approx(0.5));  // symmetry
  double prev = -1.0;
  for (double t = -0.1; t <= 1.1; t += 0.01) {
    const double s = bump::step(t);
    CHECK(s >= prev - 1e-15);
    prev = s;
  }
}

TEST_CASE("step derivatives match finite differences") {
  const double h = 1e-6, h2 = 2e-5;
  for (double t : {0.05, 0.2, 0.41, 0.5, 0.63, 0.8, 0.97}) {
    const double fd1 = (bump::step(t + h) - bump::step(t - h)) / (2 * h);
    CHECK(bump::step_d1(t) == doctest::Approx(fd1).epsilon(1e-7));
    const double fd2 =
        (bump::step(t + h2) - 2 * bump::step(t) + bump::step(t - h2)) / (h2 * h2);
    CHECK(bump::step_d2(t) == doctest::Approx(fd2).epsilon(2e-3).scale(1.0));
  }
}

TEST_CASE("plateau support and flat top") {
  bump::Plateau p{1.0, 2.0, 3.0, 4.0};
  CHECK(p(0.9) == 0.0);
  CHECK(p(4.1) == 0.0);
  CHECK(p(2.0) == 1.0);
  CHECK(p(2.5) == 1.0);
  CHECK(p(3.0) == 1.0);
  CHECK(p(1.5) > 0.0);
  CHECK(p(1.5) < 1.0);
  const double h = 1e-6, h2 = 2e-5, t = 3.7;
  const double fd1 = (p(t + h) - p(t - h)) / (2 * h);
  CHECK(p.d1(t) == doctest::Approx(fd1).epsilon(1e-7));
  const double fd2 = (p(t + h2) - 2 * p(t) + p(t - h2)) / (h2 * h2);
  CHECK(p.d2(t) == doctest::Approx(fd2).epsilon(2e-3).scale(1.0));
}

TEST_CASE("telescoping of shifted steps is exact") {
  // sum of step(t - k) differences telescopes to a single step
  for (double t : {-0.5, 0.3, 1.7, 2.2, 4.9}) {
    double sum = 0.0;
    for (int k = 0; k < 5; ++k)
      sum += bump::step_up(t, k, k + 1) - bump::step_up(t, k + 1, k + 2);
    const double expect = bump::step_up(t, 0, 1) - bump::step_up(t, 5, 6);
    CHECK(sum == doctest::Approx(expect).epsilon(1e-14));
  }
}
