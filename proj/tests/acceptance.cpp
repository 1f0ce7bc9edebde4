// Acceptance suite: runs every acceptance criterion at its declared
// tolerance and prints one pass/fail line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "speclab/bessel.hpp"
#include "speclab/calderon.hpp"
#include "speclab/diskspec.hpp"
#include "speclab/dyadic.hpp"
#include "speclab/experiment.hpp"
#include "speclab/exponents.hpp"
#include "speclab/fft.hpp"
#include "speclab/fit.hpp"
#include "speclab/hamflow.hpp"
#include "speclab/kernel_lab.hpp"
#include "speclab/restriction.hpp"
#include "speclab/rng.hpp"
#include "speclab/wavepacket.hpp"

using namespace speclab;

namespace {

struct Gate {
  int index;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<Gate> gates;

template <typename F>
void criterion(int index, const std::string& name, F&& body) {
  Gate g{index, name};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    auto [ok, detail] = body();
    g.pass = ok;
    g.detail = detail;
  } catch (const std::exception& e) {
    g.pass = false;
    g.detail = std::string("exception: ") + e.what();
  }
  g.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] criterion %2d: %-34s %s  (%.1fs)\n", g.pass ? "PASS" : "FAIL",
              index, name.c_str(), g.detail.c_str(), g.seconds);
  std::fflush(stdout);
  gates.push_back(g);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

geom::MetricModel extended(geom::Profile p, double c0 = 0.1) {
  auto gx1 = make_grid1(-1.0, 1.0, 8);
  Grid1 gx2{0.0, 1.0 / 1024, 1025};
  return geom::extend_even(geom::build_model_metric(p, gx1, gx2, c0));
}

exp::Report run(const std::string& id) {
  exp::ExperimentConfig cfg;
  cfg.id = id;
  return exp::run_experiment(cfg);
}

std::pair<bool, std::string> from_report(const exp::Report& rep,
                                         const std::vector<std::string>& names) {
  bool ok = true;
  std::string detail;
  for (const auto& c : rep.checks) {
    bool wanted = names.empty();
    for (const auto& n : names)
      if (c.name.rfind(n, 0) == 0) wanted = true;
    if (!wanted) continue;
    ok = ok && c.pass;
    if (!detail.empty()) detail += ", ";
    detail += c.name + "=" + fmt("%.4g", c.value);
  }
  return {ok, detail};
}

}  // namespace

int main() {
  std::printf("speclab acceptance suite\n");

  // 1. wave packet isometry and reconstruction, mu in {16, 64, 256}
  criterion(1, "wavepacket isometry (4.1)", [] {
    auto w = wp::make_window(0.25);
    double worst_iso = 0.0, worst_rt = 0.0;
    for (double mu : {16.0, 64.0, 256.0}) {
      const double L = wp::default_torus(mu, w);
      std::vector<wp::SpectralField> family = {
          wp::gaussian_field(L, 0.0, 0.0, 1.0, 6.0),
          wp::gaussian_field(L, 0.0, mu, 1.5, 8.0),
          wp::gaussian_field(L, 0.15 * mu, 1.05 * mu, 2.0, 9.0),
          wp::random_bandlimited_field(L, 0.0, 0.0, 6.0, 101),
          wp::random_bandlimited_field(L, 0.2 * mu, 1.1 * mu, 6.0, 102)};
      for (auto& f : family) {
        worst_iso = std::max(worst_iso,
                             std::abs(wp::transform_norm(f, mu, w) / f.l2_norm() - 1.0));
        auto rt = wp::roundtrip(f, mu, w);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < f.coef.size(); ++i) {
          num += std::norm(rt.coef[i] - f.coef[i]);
          den += std::norm(f.coef[i]);
        }
        worst_rt = std::max(worst_rt, std::sqrt(num / den));
      }
    }
    const bool ok = worst_iso <= 1e-6 && worst_rt <= 1e-6;
    return std::pair{ok, fmt("iso defect %.2e, roundtrip %.2e (tol 1e-6)",
                             worst_iso, worst_rt)};
  });

  // 2. flow symplecticity and group law, >= 100 seeds on the disk symbol
  criterion(2, "flow symplecticity + group law", [] {
    auto disk = extended(geom::Profile::disk);
    auto q = flow::make_rescaled_symbol(disk, 512.0, 0.25, true);
    auto seeds = flow::cone_seeds(0.25, 100, 2024);
    auto fm = flow::variational_flow(q, seeds, 0.0, 0.4);
    double dsym = 0.0, ddet = 0.0;
    for (const auto& p : fm.points) {
      dsym = std::max(dsym, flow::symplectic_defect(p.jacobian));
      ddet = std::max(ddet, std::abs(flow::det4(p.jacobian) - 1.0));
    }
    std::vector<flow::PhasePoint> mids;
    for (auto& p : fm.points) mids.push_back(p.end);
    auto back = flow::flow(q, mids, 0.4, 0.0);
    double dinv = 0.0;
    for (std::size_t i = 0; i < seeds.size(); ++i)
      for (int d = 0; d < 2; ++d) {
        dinv = std::max(dinv, std::abs(back.points[i].end.z[d] - seeds[i].z[d]));
        dinv = std::max(dinv, std::abs(back.points[i].end.zeta[d] - seeds[i].zeta[d]));
      }
    const bool ok = ddet <= 1e-8 && dsym <= 1e-8 && dinv <= 1e-8;
    return std::pair{ok, fmt("det %.2e, J^T.O.J %.2e, inverse %.2e (tol 1e-8)",
                             ddet, dsym, dinv)};
  });

  // 3. flat-metric closed forms: flow, Jacobians, kernel translation
  criterion(3, "flat-metric closed forms", [] {
    auto rep = run("flow-tests");
    double flow_defect = 1e9;
    for (auto& c : rep.checks)
      if (c.name == "flat_closed_forms") flow_defect = c.value;
    auto flat = extended(geom::Profile::flat);
    kern::KernelConfig kc;
    kc.mu = 64.0;
    kc.theta = 0.5;
    kc.r = 0.0;
    kc.s = 0.15;
    kc.beta = dyadic::build_sector(64.0, 0.5, 0.2);
    kc.window = wp::make_window(0.25);
    kc.metric = &flat;
    kern::KernelAssembly A(kc);
    const cplx a = A.value(0.1, 0.0, 0.15, 0.1);
    const cplx b = A.value(0.24, 0.0, 0.29, 0.1);
    const cplx c = A.value(0.1, 0.37, 0.15, 0.47);
    const double rel = std::max(std::abs(a - b), std::abs(a - c)) / std::abs(a);
    const bool ok = flow_defect <= 1e-8 && rel <= 1e-8;
    return std::pair{ok, fmt("flow defect %.2e, kernel translation %.2e (tol 1e-8)",
                             flow_defect, rel)};
  });

  // 4. whispering-gallery concentration exponent -2/3
  criterion(4, "whispering width slope (-2/3)", [] {
    std::vector<double> lams, ws;
    for (int m : {25, 50, 100, 200}) {
      auto md = disk::make_mode(m, 1, disk::Bc::dirichlet);
      lams.push_back(md.lambda);
      ws.push_back(disk::concentration_width(md, 0.9).width);
    }
    auto f = fit_loglog(lams, ws);
    const bool ok = std::abs(f.slope + 2.0 / 3.0) <= 0.08;
    return std::pair{ok, fmt("slope %.4f (target -0.6667 +- 0.08)", f.slope)};
  });

  // 5. L^q growth exponents gamma(q), radial sup 1/2
  criterion(5, "Lq growth exponents", [] {
    auto rep = run("disk-modes");
    return from_report(rep, {"gamma_slope", "radial_sup_slope"});
  });

  // 6. spectral-cluster lower bounds at q = 8 and q = infinity
  criterion(6, "cluster opnorm lower bounds", [] {
    auto rep = run("cluster-norms");
    return from_report(rep, {"cluster_q8_slope", "cluster_qinf_slope"});
  });

  // 7. circle restriction small-angle gain
  criterion(7, "restriction small-angle gain", [] {
    auto rep = run("restriction");
    return from_report(rep, {"restriction_q8_slope", "restriction_q6_slope"});
  });

  // 8. kernel dispersive decay exponent -1/2
  criterion(8, "kernel dispersive decay", [] {
    auto rep = run("kernel-decay");
    return from_report(rep, {"dispersive_exponent"});
  });

  // 9. Theorem 5.2 uniformity and smallness corollary
  criterion(9, "flow derivative uniformity", [] {
    auto rep = run("flow-tests");
    return from_report(rep, {"thm52_mu_spread", "corollary_monotone"});
  });

  // 10. partition of unity and square function
  criterion(10, "angular partition + square function", [] {
    double worst = 0.0;
    for (double lam : {16.0, 64.0, 510.0}) {
      auto fam = dyadic::build_angular_family(lam);
      for (double f2 = -1.0 / 8.0; f2 <= 1.0 / 8.0; f2 += 1.0 / 128.0)
        for (double f3 : {0.5, 0.77, 1.11, 1.63, 2.0})
          worst = std::max(worst,
                           std::abs(fam.partition_sum(f2 * lam, f3 * lam) - 1.0));
    }
    const double lam = 32.0;
    auto fam = dyadic::build_angular_family(lam);
    Grid2 g{make_grid1(-1, 1, 128), make_grid1(-1, 1, 128)};
    Rng rng(55);
    double lo = 1e9, hi = 0.0;
    for (int trial = 0; trial < 6; ++trial) {
      CField hat(g);
      for (int i = 0; i < g.u.n; ++i)
        for (int j = 0; j < g.v.n; ++j) {
          const double xi2 = g.u.freq(i), xi3 = g.v.freq(j);
          if (std::abs(xi2) <= lam / 8.0 && xi3 >= lam / 2.0 && xi3 <= 2.0 * lam)
            hat.at(i, j) = rng.cgaussian();
        }
      fft::backward2(hat);
      const double r = dyadic::almost_orthogonality_check(fam, hat);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    const bool ok = worst <= 1e-12 && lo >= 0.7 && hi <= 1.5;
    return std::pair{ok, fmt("partition err %.2e (tol 1e-12), sq ratio [%.3f, %.3f]",
                             worst, lo, hi)};
  });

  // 11. Calderon weighted convolution bound
  criterion(11, "weighted convolution bound", [] {
    auto rep = run("calderon-check");
    return from_report(rep, {"calderon_ratio", "calderon_length_drift"});
  });

  // 12. determinism of experiment outputs
  criterion(12, "byte-identical CSV determinism", [] {
    exp::ExperimentConfig cfg;
    cfg.id = "calderon-check";
    cfg.seed = 31415;
    cfg.params["weights"] = 8;
    cfg.params["trials"] = 2;
    cfg.params["lengths"] = {100.0, 150.0};
    cfg.params["n_grid"] = 512;
    auto a = exp::run_experiment(cfg);
    auto b = exp::run_experiment(cfg);
    exp::ExperimentConfig cfg2;
    cfg2.id = "disk-modes";
    cfg2.params["m_sweep"] = {25, 50, 100};
    cfg2.params["radial_k_sweep"] = {20, 40, 80};
    cfg2.params["q_list"] = {6.0};
    auto c = exp::run_experiment(cfg2);
    auto d = exp::run_experiment(cfg2);
    const bool ok = a.csv == b.csv && c.csv == d.csv && !a.csv.empty();
    return std::pair{ok, std::string(ok ? "re-runs identical" : "MISMATCH")};
  });

  int failed = 0;
  for (const auto& g : gates)
    if (!g.pass) ++failed;
  std::printf("%d/%zu criteria passed\n", static_cast<int>(gates.size()) - failed,
              gates.size());
  return failed == 0 ? 0 : 1;
}
