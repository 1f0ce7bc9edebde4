#include "speclab/diskspec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "speclab/fft.hpp"
#include "speclab/quad.hpp"
#include "speclab/rng.hpp"

namespace speclab::disk {

namespace {

// 2 * int_0^1 J_m(z r)^2 r dr in closed form at a zero of J_m or J_m'.
double radial_l2(const DiskMode& mode) {
  if (mode.bc == Bc::dirichlet) {
    const double jp = bessel::Jp(mode.m, mode.zero);
    return jp * jp;
  }
  const double j = bessel::J(mode.m, mode.zero);
  const double mm = static_cast<double>(mode.m);
  return (1.0 - mm * mm / (mode.zero * mode.zero)) * j * j;
}

int default_nodes(double lambda) {
  return std::max(400, static_cast<int>(std::ceil(6.0 * lambda)));
}

}  // namespace

DiskMode make_mode(int m, int k, Bc bc) {
  DiskMode mode;
  mode.m = m;
  mode.k = k;
  mode.bc = bc;
  mode.zero = bessel::zero(m, k, bc);
  mode.lambda = mode.zero;
  mode.norm = 1.0 / std::sqrt(radial_l2(mode));
  return mode;
}

cplx mode_eval(const DiskMode& mode, double r, double theta) {
  if (r < 0.0 || r > 1.0 + 1e-12)
    throw std::invalid_argument("mode_eval: point outside the closed unit disk");
  const double radial = mode.norm * bessel::J(mode.m, mode.zero * std::min(r, 1.0));
  return radial * std::exp(cplx(0.0, mode.m * theta));
}

std::vector<cplx> mode_eval(const DiskMode& mode,
                            const std::vector<std::pair<double, double>>& pts) {
  std::vector<cplx> out;
  out.reserve(pts.size());
  for (const auto& [r, th] : pts) out.push_back(mode_eval(mode, r, th));
  return out;
}

WidthResult concentration_width(const DiskMode& mode, double mass) {
  if (mass <= 0.0 || mass > 1.0)
    throw std::invalid_argument("concentration_width: mass must lie in (0, 1]");
  if (mass == 1.0) return {1.0, 1.0};
  const int n = default_nodes(mode.lambda);
  auto gr = gauss_legendre(n, 0.0, 1.0);
  // cumulative mass from the boundary inward
  std::vector<double> contrib(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = mode.norm * bessel::J(mode.m, mode.zero * gr.x[i]);
    contrib[i] = 2.0 * f * f * gr.x[i] * gr.w[i];
    total += contrib[i];
  }
  if (!(total > 0.0) || std::abs(total - 1.0) > 1e-6)
    throw std::runtime_error("concentration_width: quadrature failed to normalize");
  double acc = 0.0;
  for (int i = n - 1; i >= 0; --i) {
    acc += contrib[i];
    if (acc >= mass * total)
      return {1.0 - gr.x[i], acc / total};
  }
  return {1.0, 1.0};
}

double mode_lq_ratio(const DiskMode& mode, double q, int nodes) {
  if (q < 2.0) throw std::invalid_argument("mode_lq_ratio: q >= 2 required");
  const int n = nodes > 0 ? nodes : default_nodes(mode.lambda);
  // >= 10 points per radial wavelength 2 pi / lambda on [0, 1]
  if (n < 10.0 * mode.lambda / kTwoPi)
    throw std::invalid_argument(
        "mode_lq_ratio: under-resolved grid (fewer than 10 points per wavelength)");
  if (std::isinf(q)) {
    // grid sup with one Richardson-style refinement check
    auto sup_on = [&](int nn) {
      double s = 0.0;
      for (int i = 0; i <= nn; ++i) {
        const double r = static_cast<double>(i) / nn;
        s = std::max(s, std::abs(mode.norm * bessel::J(mode.m, mode.zero * r)));
      }
      return s;
    };
    const double s1 = sup_on(n), s2 = sup_on(2 * n);
    if (std::abs(s2 - s1) > 1e-3 * s2)
      throw std::runtime_error("mode_lq_ratio: sup did not stabilize under refinement");
    return s2;
  }
  auto gr = gauss_legendre(n, 0.0, 1.0);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = std::abs(mode.norm * bessel::J(mode.m, mode.zero * gr.x[i]));
    acc += 2.0 * std::pow(f, q) * gr.x[i] * gr.w[i];
  }
  return std::pow(acc, 1.0 / q);
}

SpectralCluster cluster_members(double lambda, Bc bc) {
  if (lambda < 2.0) throw std::invalid_argument("cluster_members: lambda >= 2");
  SpectralCluster cl;
  cl.lambda = lambda;
  cl.bc = bc;
  for (int m = 0; m <= static_cast<int>(lambda) + 1; ++m) {
    auto zs = bessel::zeros_in(m, lambda, lambda + 1.0, bc);
    for (auto& [k, z] : zs) {
      DiskMode mode;
      mode.m = m;
      mode.k = k;
      mode.bc = bc;
      mode.zero = z;
      mode.lambda = z;
      mode.norm = 1.0 / std::sqrt(radial_l2(mode));
      cl.modes.push_back(mode);
    }
  }
  // window of width 1 cannot hold two zeros of the same order (gap > pi), so
  // every member carries a distinct angular order
  for (std::size_t i = 1; i < cl.modes.size(); ++i)
    if (cl.modes[i].m == cl.modes[i - 1].m)
      throw std::runtime_error("cluster_members: duplicate angular order");
  return cl;
}

namespace {

struct ClusterEval {
  const SpectralCluster* cl;
  int nr = 0;
  GaussRule gr;
  std::vector<std::vector<double>> prof;  // [mode][r-node]
  int mmax = 0;

  explicit ClusterEval(const SpectralCluster& c) : cl(&c) {
    nr = default_nodes(c.lambda + 1.0);
    gr = gauss_legendre(nr, 0.0, 1.0);
    prof.resize(c.modes.size());
    for (std::size_t i = 0; i < c.modes.size(); ++i) {
      prof[i].resize(nr);
      const auto& md = c.modes[i];
      mmax = std::max(mmax, md.m);
      for (int r = 0; r < nr; ++r)
        prof[i][r] = md.norm * bessel::J(md.m, md.zero * gr.x[r]);
    }
  }

  double lq(const std::vector<cplx>& coef, double q) const {
    // n_theta >= q * mmax + margin makes the trapezoid rule exact for the
    // trigonometric polynomial |u|^q (q even) and ample otherwise
    int nth = 256;
    const int need = static_cast<int>((std::isinf(q) ? 8.0 : std::max(q, 4.0)) * mmax) + 16;
    while (nth < need) nth *= 2;
    std::vector<cplx> line(nth);
    double acc = 0.0;
    double sup = 0.0;
    for (int r = 0; r < nr; ++r) {
      std::fill(line.begin(), line.end(), cplx(0.0));
      for (std::size_t i = 0; i < prof.size(); ++i)
        line[cl->modes[i].m % nth] += coef[i] * prof[i][r];
      fft::dft1(line.data(), nth, +1);  // u(r, theta_j), theta_j = 2pi j / nth
      if (std::isinf(q)) {
        for (const auto& z : line) sup = std::max(sup, std::abs(z));
      } else {
        double s = 0.0;
        for (const auto& z : line) s += std::pow(std::abs(z), q);
        acc += 2.0 * (s / nth) * gr.x[r] * gr.w[r];
      }
    }
    return std::isinf(q) ? sup : std::pow(acc, 1.0 / q);
  }
};

}  // namespace

double cluster_lq_norm(const SpectralCluster& cl, const std::vector<cplx>& coeffs,
                       double q) {
  if (cl.modes.empty()) throw std::invalid_argument("cluster_lq_norm: empty cluster");
  if (coeffs.size() != cl.modes.size())
    throw std::invalid_argument("cluster_lq_norm: coefficient size mismatch");
  return ClusterEval(cl).lq(coeffs, q);
}

OpNormEstimate cluster_opnorm(double lambda, double q, int trials,
                              std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("cluster_opnorm: trials >= 1");
  auto cl = cluster_members(lambda, Bc::dirichlet);
  if (cl.modes.empty())
    throw std::invalid_argument("cluster_opnorm: empty cluster at this lambda");
  ClusterEval ev(cl);
  const std::size_t n = cl.modes.size();

  OpNormEstimate est;
  est.members = static_cast<int>(n);

  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    std::vector<cplx> c(n);
    double s = 0.0;
    for (auto& z : c) {
      z = rng.cgaussian();
      s += std::norm(z);
    }
    for (auto& z : c) z /= std::sqrt(s);
    est.random_best = std::max(est.random_best, ev.lq(c, q));
  }

  // all mass on the whispering mode (largest angular order)
  std::size_t iw = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (cl.modes[i].m > cl.modes[iw].m) iw = i;
  {
    std::vector<cplx> c(n, cplx(0.0));
    c[iw] = 1.0;
    est.whisper = ev.lq(c, q);
  }

  // coherent point-focus candidate: coefficients conj(u_i(r0, 0)) at the
  // radius maximizing the cluster's spectral function
  {
    int best_r = 0;
    double best = -1.0;
    for (int r = 0; r < ev.nr; ++r) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += ev.prof[i][r] * ev.prof[i][r];
      if (s > best) {
        best = s;
        best_r = r;
      }
    }
    // also probe the exact center (only m = 0 contributes there)
    std::vector<cplx> c(n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      c[i] = ev.prof[i][best_r];
      s += std::norm(c[i]);
    }
    for (auto& z : c) z /= std::sqrt(s);
    est.focus = ev.lq(c, q);
    for (std::size_t i = 0; i < n; ++i)
      if (cl.modes[i].m == 0) {
        std::vector<cplx> c0(n, cplx(0.0));
        c0[i] = 1.0;
        est.focus = std::max(est.focus, ev.lq(c0, q));
      }
  }

  est.value = std::max({est.random_best, est.whisper, est.focus});
  est.candidate = est.value == est.random_best
                      ? "random"
                      : (est.value == est.whisper ? "whisper" : "focus");
  return est;
}

}  // namespace speclab::disk
