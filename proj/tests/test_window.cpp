#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "speclab/grid.hpp"
#include "speclab/quad.hpp"
#include "speclab/window.hpp"

using namespace speclab;
using namespace speclab::wp;

TEST_CASE("normalization ||g||_2 = (2pi)^{-1}") {
  for (double c : {0.25, 0.125, 0.0625}) {
    auto w = make_window(c);
    CHECK(w.l2_norm() == doctest::Approx(1.0 / kTwoPi).epsilon(1e-10));
  }
  CHECK_THROWS(make_window(0.3));
  CHECK_THROWS(make_window(0.0));
}

TEST_CASE("spectral support is exactly |zeta| <= c") {
  auto w = make_window(0.25);
  CHECK(w.ghat_radial(0.25) == 0.0);
  CHECK(w.ghat_radial(0.2500001) == 0.0);
  CHECK(w.ghat_radial(0.2) > 0.0);
  CHECK(w.ghat(0.18, 0.18) == 0.0);  // |zeta| = 0.2546
}

TEST_CASE("g is real, radial, and matches a direct inverse transform") {
  auto w = make_window(0.25);
  // direct 2-D inverse transform at a point: g(z) = (2pi)^{-2} int ghat e^{iz.zeta}
  auto direct = [&](double z2, double z3) {
    const int n = 200;
    auto gr = gauss_legendre(n, -w.c, w.c);
    cplx acc = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const double v = w.ghat(gr.x[a], gr.x[b]);
        if (v == 0.0) continue;
        acc += v * std::exp(cplx(0.0, z2 * gr.x[a] + z3 * gr.x[b])) * gr.w[a] * gr.w[b];
      }
    return acc / (kTwoPi * kTwoPi);
  };
  for (auto [z2, z3] : {std::pair{0.0, 0.0}, {3.0, 4.0}, {-7.0, 1.0}, {20.0, 0.0}}) {
    const cplx d = direct(z2, z3);
    CHECK(std::abs(d.imag()) <= 1e-12);  // real
    CHECK(d.real() == doctest::Approx(w.g_radial(std::hypot(z2, z3))).epsilon(5e-7).scale(w.g0()));
    // radial symmetry g(z) = g(-z)
    const cplx dm = direct(-z2, -z3);
    CHECK(std::abs(d - dm) <= 1e-12);
  }
}

TEST_CASE("tail envelope: support radius shrinks with eps") {
  auto w = make_window(0.25);
  const double r6 = w.support_radius(1e-6);
  const double r10 = w.support_radius(1e-10);
  CHECK(r6 < r10);
  CHECK(std::abs(w.g_radial(1.05 * r10)) <= 1.1e-10 * w.g0());
}
