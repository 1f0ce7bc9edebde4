#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "speclab/dyadic.hpp"
#include "speclab/fft.hpp"
#include "speclab/rng.hpp"

using namespace speclab;
using namespace speclab::dyadic;

TEST_CASE("family shape at lambda = 64") {
  auto fam = build_angular_family(64.0);
  CHECK(fam.N == 2);
  CHECK(fam.members.size() == 4);  // j in {+-1, +-2}
  CHECK(fam.at(2).kind == Kind::cap);
  CHECK(fam.at(1).theta == 0.5);
  CHECK_THROWS(build_angular_family(4.0));
}

TEST_CASE("partition of unity on the covered set") {
  for (double lam : {16.0, 64.0, 510.0}) {
    auto fam = build_angular_family(lam);
    double worst = 0.0;
    for (double f2 = -1.0 / 8.0; f2 <= 1.0 / 8.0; f2 += 1.0 / 64.0)
      for (double f3 : {0.5, 0.8, 1.3, 2.0}) {
        const double s = fam.partition_sum(f2 * lam, f3 * lam);
        worst = std::max(worst, std::abs(s - 1.0));
      }
    CHECK(worst <= 1e-12);
    // center of the covered set
    CHECK(fam.partition_sum(0.0, lam) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("support containment and mirror symmetry") {
  const double lam = 64.0;
  auto fam = build_angular_family(lam);
  const double s23 = std::cbrt(lam * lam);
  for (const auto& m : fam.members) {
    // declared spec box
    double blo2, bhi2;
    if (std::abs(m.j) == fam.N) {
      blo2 = -s23;
      bhi2 = s23;
    } else {
      const double lo = std::ldexp(lam, -std::abs(m.j) - 2);
      const double hi = std::ldexp(lam, -std::abs(m.j) + 1);
      blo2 = m.j > 0 ? lo : -hi;
      bhi2 = m.j > 0 ? hi : -lo;
    }
    for (double xi2 = -2.0 * lam; xi2 <= 2.0 * lam; xi2 += lam / 256.0) {
      const double v = m(xi2, lam);
      if (v != 0.0) {
        CHECK(xi2 >= blo2 - 1e-9);
        CHECK(xi2 <= bhi2 + 1e-9);
      }
      // vanishes outside the xi3 window
      CHECK(m(xi2, lam / 5.0) == 0.0);
      CHECK(m(xi2, 5.0 * lam) == 0.0);
    }
    // mirror: beta_{-j}(xi2, xi3) = beta_j(-xi2, xi3)
    const auto& mm = fam.at(-m.j);
    for (double xi2 : {3.0, 17.0, 40.0, -22.0})
      CHECK(mm(xi2, 1.1 * lam) == doctest::Approx(m(-xi2, 1.1 * lam)).epsilon(1e-14));
  }
  // beta_1 vanishes at xi2 = lambda/2 + margin... support is [below lambda]
  CHECK(fam.at(1)(lam * 1.01, lam) == 0.0);
}

TEST_CASE("aux phi/psi separations") {
  auto fam = build_angular_family(64.0);
  for (int j : {1, -1}) {
    auto beta = fam.at(j);
    auto phi = build_aux(fam, j, Kind::aux_phi);
    auto psi = build_aux(fam, j, Kind::aux_psi);
    const double margin = std::ldexp(64.0, -std::abs(j) - 10);
    // phi == 1 on a margin-neighbourhood of supp(beta)
    for (double xi2 = beta.lo2 - margin; xi2 <= beta.hi2 + margin; xi2 += margin / 2)
      CHECK(phi(xi2, 64.0) == doctest::Approx(1.0).epsilon(1e-14));
    // psi == 1 on a margin-neighbourhood of supp(phi)
    for (double xi2 = phi.lo2 - margin / 2; xi2 <= phi.hi2 + margin / 2; xi2 += margin)
      CHECK(psi(xi2, 64.0) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("shells and conic multiplier") {
  auto g = build_conic();
  CHECK(g.at3(1.0, 0.0, 1.0) == 1.0);   // ratio 1 inside the flat region
  CHECK(g.at3(5.0, 0.0, 1.0) == 0.0);   // ratio 5 outside support
  CHECK(g.at3(0.1, 0.0, 1.0) == 0.0);   // ratio below 1/4
  auto s6 = build_shell(6);
  CHECK(s6.at3(45.0, 0.0, 45.0) > 0.0);  // |xi| ~ 64 in the cone
  CHECK(s6.at3(200.0, 0.0, 200.0) == 0.0);
  CHECK(s6.at3(45.0, 0.0, 1.0) == 0.0);  // outside the cone
  // adjacent shells telescope to the conic plateau value on the cone axis
  auto s5 = build_shell(5), s7 = build_shell(7);
  const double x = 60.0;
  const double tot = s5.at3(x, 0, x) + s6.at3(x, 0, x) + s7.at3(x, 0, x);
  CHECK(tot == doctest::Approx(g.at3(x, 0, x)).epsilon(1e-13));
}

static CField random_bandlimited(const Grid2& g, double lam, Rng& rng,
                                 bool covered_only) {
  CField hat(g);
  for (int i = 0; i < g.u.n; ++i) {
    const double xi2 = g.u.freq(i);
    for (int j = 0; j < g.v.n; ++j) {
      const double xi3 = g.v.freq(j);
      const bool in_cov = std::abs(xi2) <= lam / 8.0 && xi3 >= lam / 2.0 &&
                          xi3 <= 2.0 * lam;
      if (in_cov || (!covered_only && std::abs(xi2) < lam && std::abs(xi3) < 3 * lam))
        hat.at(i, j) = rng.cgaussian();
    }
  }
  fft::backward2(hat);
  return hat;
}

TEST_CASE("multiplier application: idempotence region and disjoint support") {
  const double lam = 32.0;
  auto fam = build_angular_family(lam);
  Grid2 g{make_grid1(-1, 1, 128), make_grid1(-1, 1, 128)};
  CHECK(g.u.nyquist() >= 4 * lam);

  // lattice point mass at (0, ~lam) lies where the cap is 1
  const double xi3a = g.v.freq(static_cast<int>(std::lround(lam / g.v.freq(1))));
  CField f(g);
  for (int i = 0; i < g.u.n; ++i)
    for (int j = 0; j < g.v.n; ++j) {
      const double x3 = g.v.x(j);
      f.at(i, j) = std::exp(cplx(0.0, xi3a * x3));
    }
  auto out = apply_multiplier(fam.at(fam.N), f);
  double err = 0.0;
  for (std::size_t k = 0; k < f.data.size(); ++k)
    err = std::max(err, std::abs(out.data[k] - f.data[k]));
  CHECK(err <= 1e-12);

  // lattice point mass at xi2 ~ lam/2 is outside the cap's support
  const double xi2b = g.u.freq(static_cast<int>(std::lround(lam / 2.0 / g.u.freq(1))));
  CField f2(g);
  for (int i = 0; i < g.u.n; ++i)
    for (int j = 0; j < g.v.n; ++j)
      f2.at(i, j) = std::exp(cplx(0.0, xi2b * g.u.x(i) + xi3a * g.v.x(j)));
  auto out2 = apply_multiplier(fam.at(fam.N), f2);  // cap vanishes at lam/2
  double mx = 0.0;
  for (auto& z : out2.data) mx = std::max(mx, std::abs(z));
  CHECK(mx <= 1e-12);

  // Nyquist violation rejected
  Grid2 gs{make_grid1(-1, 1, 16), make_grid1(-1, 1, 16)};
  CField small(gs);
  CHECK_THROWS(apply_multiplier(fam.at(1), small));
}

TEST_CASE("partition + Parseval: sum of pieces reassembles covered fields") {
  const double lam = 32.0;
  auto fam = build_angular_family(lam);
  Grid2 g{make_grid1(-1, 1, 128), make_grid1(-1, 1, 128)};
  Rng rng(7);
  auto f = random_bandlimited(g, lam, rng, true);
  CField sum(g);
  for (const auto& m : fam.members) {
    if (m.j == -fam.N) continue;
    auto piece = apply_multiplier(m, f);
    for (std::size_t k = 0; k < sum.data.size(); ++k) sum.data[k] += piece.data[k];
  }
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < sum.data.size(); ++k) {
    num += std::norm(sum.data[k] - f.data[k]);
    den += std::norm(f.data[k]);
  }
  CHECK(std::sqrt(num / den) <= 1e-10);
}

TEST_CASE("square function ratio") {
  const double lam = 32.0;
  auto fam = build_angular_family(lam);
  Grid2 g{make_grid1(-1, 1, 128), make_grid1(-1, 1, 128)};
  Rng rng(11);

  // single-piece field: ratio 1
  auto f = random_bandlimited(g, lam, rng, true);
  auto one = apply_multiplier(fam.at(1), f);
  double n1 = 0.0;
  for (auto& z : one.data) n1 += std::norm(z);
  if (n1 > 1e-12) {
    // project once more: interior of beta_1 -> unchanged under beta_1
    const double r = almost_orthogonality_check(fam, one);
    CHECK(r >= 0.7);
    CHECK(r <= 1.5);
  }

  // random covered field: ratio in [0.7, 1.5]
  for (int trial = 0; trial < 4; ++trial) {
    auto fr = random_bandlimited(g, lam, rng, true);
    const double r = almost_orthogonality_check(fam, fr);
    CHECK(r >= 0.7);
    CHECK(r <= 1.5);
  }
  CField zero(g);
  CHECK_THROWS(almost_orthogonality_check(fam, zero));
}

TEST_CASE("sector cutoffs and serialization") {
  auto sec = build_sector(64.0, 0.25, 0.0625);
  CHECK(sec(0.25 * 64.0, 64.0) == 1.0);
  CHECK(sec(0.5 * 64.0, 64.0) == 0.0);
  CHECK(sec(0.25 * 20.0, 20.0) == 0.0);  // zeta3 outside [mu/2, 2mu]
  auto cap = build_sector(64.0, 0.0, 1.0 / 8.0);  // mu^{-1/2} cap
  CHECK(cap(0.0, 64.0) == 1.0);
  CHECK(cap(16.0, 64.0) == 0.0);

  auto js = sec.to_json();
  auto back = member_from_json(js);
  CHECK(back.theta_center == sec.theta_center);
  CHECK(back.theta_bar == sec.theta_bar);
  for (double a : {10.0, 14.0, 18.0})
    CHECK(back(a, 64.0) == sec(a, 64.0));
}
