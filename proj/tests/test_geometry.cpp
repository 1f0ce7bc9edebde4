#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "speclab/fit.hpp"
#include "speclab/geometry.hpp"

using namespace speclab;
using namespace speclab::geom;

static MetricModel make_disk(double h2, double c0 = 0.1, int n1 = 32) {
  auto gx1 = make_grid1(-1.0, 1.0, n1);
  const int n2 = static_cast<int>(std::lround(1.0 / h2)) + 1;
  Grid1 gx2{0.0, h2, n2};
  return build_model_metric(Profile::disk, gx1, gx2, c0);
}

TEST_CASE("flat profile is identically euclidean") {
  auto m = build_model_metric(Profile::flat, make_grid1(-1, 1, 16),
                              Grid1{0.0, 0.01, 101}, 0.1);
  for (double v : m.rho) CHECK(v == 1.0);
  for (double v : m.g11) CHECK(v == 1.0);
}

TEST_CASE("disk dual metric before blending") {
  // ds^2 = dr^2 + r^2 dth^2 with r = 1 - x2: g_{11}(x2=0.1) = 0.81
  CHECK(disk_g11_dual_raw(0.1) == doctest::Approx(0.81).epsilon(1e-15));
  CHECK(disk_g11_raw(0.1) == doctest::Approx(1.0 / 0.81).epsilon(1e-15));
}

TEST_CASE("disk model: boundary row and smallness") {
  auto m = make_disk(0.002);
  const int n2 = m.x2.n;
  for (int i = 0; i < m.x1.n; ++i) CHECK(m.g11_sample(i, 0) == 1.0);
  double dev = 0.0;
  for (double v : m.g11) dev = std::max(dev, std::abs(v - 1.0));
  CHECK(dev <= 0.1);
  CHECK(dev > 0.0);  // not the flat model
  (void)n2;
}

TEST_CASE("argument validation") {
  CHECK_THROWS(build_model_metric(Profile::disk, make_grid1(-1, 1, 8),
                                  Grid1{0.05, 0.01, 10}, 0.1));  // no boundary row
  CHECK_THROWS(build_model_metric(Profile::disk, make_grid1(-1, 1, 8),
                                  Grid1{0.0, 0.01, 10}, 0.7));  // c0 out of range
}

TEST_CASE("even extension: flat is constant, disk reflects exactly") {
  auto mf = build_model_metric(Profile::flat, make_grid1(-1, 1, 8),
                               Grid1{0.0, 0.01, 101}, 0.1);
  auto ef = extend_even(mf);
  CHECK(ef.second_diff_at_0 == 0.0);
  CHECK(ef.lipschitz_g11 == 0.0);

  auto m = make_disk(0.001, 0.1, 8);
  auto e = extend_even(m);
  const int nd = e.x2.n;
  const int j0 = nd / 2;  // x2 = 0
  for (int i = 0; i < e.x1.n; ++i)
    for (int off = 1; off < j0; ++off) {
      CHECK(e.g11[i * nd + (j0 + off)] == e.g11[i * nd + (j0 - off)]);
      CHECK(e.rho[i * nd + (j0 + off)] == e.rho[i * nd + (j0 - off)]);
    }
}

TEST_CASE("kink: second difference grows like 1/h, first difference bounded") {
  auto e1 = extend_even(make_disk(1e-2, 0.1, 8));
  auto e2 = extend_even(make_disk(1e-3, 0.1, 8));
  CHECK(e2.second_diff_at_0 > 5.0 * e1.second_diff_at_0);
  // first differences settle once h resolves the blend band
  auto ea = extend_even(make_disk(2e-3, 0.1, 8));
  CHECK(e2.lipschitz_g11 < 1.3 * ea.lipschitz_g11 + 1e-12);
  // the kink slope of g^{11} at 0+ is d/dx2 (1-x2)^{-2} = 2; second difference
  // at 0 is ~ 2*slope/h
  CHECK(e2.second_diff_at_0 * 1e-3 / 2.0 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("extend_data parities") {
  auto gx1 = make_grid1(-1, 1, 4);
  const int nh = 101;
  Grid1 gx2{0.0, 1.0 / (nh - 1), nh};
  std::vector<double> fs(gx1.n * nh), fc(gx1.n * nh), fq(gx1.n * nh);
  for (int i = 0; i < gx1.n; ++i)
    for (int j = 0; j < nh; ++j) {
      const double x2 = gx2.x(j);
      fs[i * nh + j] = std::sin(kPi * x2);
      fc[i * nh + j] = std::cos(kPi * x2);
      fq[i * nh + j] = x2 * (1.0 - x2);
    }
  auto es = extend_data(fs, gx1, gx2, Parity::odd);
  auto ec = extend_data(fc, gx1, gx2, Parity::even);
  auto eq = extend_data(fq, gx1, gx2, Parity::odd);
  const int nd = 2 * (nh - 1), j0 = nd / 2;
  for (int j = 0; j < nd; ++j) {
    const double x2 = -1.0 + j * gx2.dx;
    CHECK(es[j] == doctest::Approx(std::sin(kPi * x2)).epsilon(1e-12));
    CHECK(ec[j] == doctest::Approx(std::cos(kPi * x2)).epsilon(1e-12));
  }
  // f = x2(1-x2) odd-extended: value at x2 = -0.25 equals -f(0.25) = -0.1875
  const int jm = j0 - 25;
  CHECK(eq[jm] == doctest::Approx(-0.1875).epsilon(1e-14));
  // odd parity with nonzero trace rejected, error names the trace
  std::vector<double> bad(gx1.n * nh, 0.3);
  CHECK_THROWS_WITH_AS(extend_data(bad, gx1, gx2, Parity::odd),
                       doctest::Contains("0.3"), std::invalid_argument);
}

TEST_CASE("symbol: closed forms on and off the hyperbolic region") {
  auto e = extend_even(build_model_metric(Profile::flat, make_grid1(-1, 1, 8),
                                          Grid1{0.0, 1.0 / 128, 129}, 0.1));
  const double lam = 64.0;
  auto s = build_symbol(e, lam);
  // flat metric, xi = (0, lambda): p = lambda
  CHECK(s.p(0.0, 0.0, 0.0, lam) == doctest::Approx(lam).epsilon(1e-13));
  // flat, xi2 = lambda/10, xi3 = lambda: p = lambda sqrt(1 - 1/100)
  CHECK(s.p(0.0, 0.0, lam / 10.0, lam) ==
        doctest::Approx(lam * std::sqrt(1.0 - 0.01)).epsilon(1e-13));
  // outside the box: p = |xi'|
  CHECK(s.p(0.0, 0.0, lam / 2.0, 8.0 * lam) ==
        doctest::Approx(std::hypot(lam / 2.0, 8.0 * lam)).epsilon(1e-13));
  // near xi' = 0: p = 1
  CHECK(s.p(0.0, 0.0, 0.1, 0.2) == doctest::Approx(1.0).epsilon(1e-13));
  // homogeneity on the outer region
  const double p1 = s.p(0.0, 0.0, lam, 6.0 * lam);
  const double p2 = s.p(0.0, 0.0, 2.0 * lam, 12.0 * lam);
  CHECK(p2 == doctest::Approx(2.0 * p1).epsilon(1e-12));
}

TEST_CASE("symbol xi-derivatives agree with finite differences") {
  auto e = extend_even(make_disk(1.0 / 256, 0.1, 8));
  auto s = build_symbol(e, 32.0);
  const double h = 1e-5;
  for (auto [xi2, xi3] : {std::pair{3.0, 33.0}, {3.9, 9.1}, {-3.6, 40.0},
                          {10.0, 20.0}, {2.0, 130.0}}) {
    auto a = s.A(xi2, xi3);
    auto fd = [&](double d2, double d3) {
      return s.A(xi2 + d2, xi3 + d3).v;
    };
    CHECK(a.d2 == doctest::Approx((fd(h, 0) - fd(-h, 0)) / (2 * h)).epsilon(2e-5).scale(1 + std::abs(a.d2)));
    CHECK(a.d3 == doctest::Approx((fd(0, h) - fd(0, -h)) / (2 * h)).epsilon(2e-5).scale(1 + std::abs(a.d3)));
    CHECK(a.d22 == doctest::Approx((fd(h, 0) - 2 * a.v + fd(-h, 0)) / (h * h)).epsilon(1e-3).scale(1 + std::abs(a.d22)));
    CHECK(a.d23 == doctest::Approx((fd(h, h) - fd(h, -h) - fd(-h, h) + fd(-h, -h)) / (4 * h * h)).epsilon(1e-3).scale(1 + std::abs(a.d23)));
    auto b = s.B(xi2, xi3);
    auto fdb = [&](double d2, double d3) { return s.B(xi2 + d2, xi3 + d3).v; };
    CHECK(b.d2 == doctest::Approx((fdb(h, 0) - fdb(-h, 0)) / (2 * h)).epsilon(2e-5).scale(1 + std::abs(b.d2)));
    CHECK(b.d33 == doctest::Approx((fdb(0, h) - 2 * b.v + fdb(0, -h)) / (h * h)).epsilon(1e-3).scale(1 + std::abs(b.d33)));
  }
}

TEST_CASE("truncation: identity on flat, O(1/lambda) on disk") {
  auto ef = extend_even(build_model_metric(Profile::flat, make_grid1(-1, 1, 8),
                                           Grid1{0.0, 1.0 / 128, 129}, 0.1));
  auto sf = build_symbol(ef, 64.0);
  auto tf = truncate_symbol(sf, 32.0);
  for (double x2 : {0.0, 0.13, 0.41})
    CHECK(tf.p(0.0, x2, 4.0, 64.0) == doctest::Approx(sf.p(0.0, x2, 4.0, 64.0)).epsilon(1e-13));
  CHECK_THROWS(truncate_symbol(sf, 1e9));  // above Nyquist

  // scale-normalized sup difference is O(1/lambda) on the disk: lambda * sup
  // stays bounded across the sweep and the sup itself decays.  The clean
  // asymptotic regime starts once the cutoff resolves the blend band.
  auto ed = extend_even(make_disk(1.0 / 2048, 0.1, 8));
  std::vector<double> lams = {128.0, 256.0, 512.0, 1024.0}, sup;
  const double c = 1.0;  // truncation constant (configuration)
  for (double lam : lams) {
    auto s = build_symbol(ed, lam);
    auto t = truncate_symbol(s, c * lam);
    const int row = s.row_of(0.0);
    double m = 0.0;
    for (double x2 = -0.2; x2 <= 0.2; x2 += 1e-3)
      m = std::max(m, std::abs(t.W(row, x2) - ed.W_at(0.0, x2)));
    sup.push_back(m);
    CHECK(lam * m <= 2.0);  // single constant C works across the sweep
  }
  CHECK(sup.back() < 0.25 * sup.front());
  auto fit = fit_loglog(lams, sup);
  CHECK(fit.slope < -0.7);
  CHECK(fit.slope > -2.0);
}

TEST_CASE("two-scale truncation difference concentrates at the kink") {
  // second-derivative profile of (S_{K1} - S_{K2}) W decays away from x2 = 0
  auto ed = extend_even(make_disk(1.0 / 2048, 0.1, 8));
  auto s = build_symbol(ed, 64.0);
  auto t1 = truncate_symbol(s, 64.0);  // c*mu with c=1
  auto t2 = truncate_symbol(s, 8.0);   // c*mu^{1/2}
  const int row = s.row_of(0.0);
  auto d2diff = [&](double x2) {
    return std::abs(t1.W_d2(row, x2) - t2.W_d2(row, x2));
  };
  const double peak = d2diff(0.0);
  CHECK(peak > 0.0);
  // envelope at x2 = k / K2 for k = 2, 4, 8: superpolynomial decay, so the
  // fitted log-log slope against <K2 x2> is at most -2.5
  std::vector<double> xs = {2.0 / 8.0, 4.0 / 8.0, 8.0 / 8.0}, ys;
  for (double x : xs) {
    double env = 0.0;  // local max against oscillation
    for (double d = -0.05; d <= 0.05; d += 0.004) env = std::max(env, d2diff(x + d));
    ys.push_back(env / peak);
  }
  std::vector<double> w;
  for (double x : xs) w.push_back(std::hypot(1.0, 8.0 * x));
  auto fit = fit_loglog(w, ys);
  CHECK(fit.slope < -2.5);
}

TEST_CASE("serialization round trip") {
  auto m = extend_even(make_disk(0.01, 0.1, 8));
  const std::string path = "/tmp/speclab_metric_test.txt";
  save_metric(m, path);
  auto l = load_metric(path);
  CHECK(l.extended);
  CHECK(l.x2.n == m.x2.n);
  CHECK(l.g11 == m.g11);
  CHECK(l.rho == m.rho);
  CHECK(l.c0 == m.c0);
  std::remove(path.c_str());
}
