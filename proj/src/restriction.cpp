#include "speclab/restriction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "speclab/quad.hpp"

namespace speclab::restr {

namespace {

struct Arc {
  double len = 0.0;   // 2^{-j}, or 2pi for j = 0
  double rho = 1.0;   // constant density value
  GaussRule nodes;    // angles + weights (weights include rho)
};

Arc make_arc(const ArcConfig& cfg) {
  if (cfg.nodes < 16)
    throw std::invalid_argument(
        "extension: under-resolved arc (fewer than 16 nodes)");
  Arc a;
  a.len = cfg.j == 0 ? kTwoPi : std::ldexp(1.0, -cfg.j);
  a.rho = cfg.normalized ? 1.0 / std::sqrt(a.len) : 1.0;
  const int n = cfg.nodes << cfg.refine;
  a.nodes = gauss_legendre(n, 0.0, a.len);
  for (auto& w : a.nodes.w) w *= a.rho;
  return a;
}

cplx eval(const Arc& a, double r, double phi) {
  cplx s = 0.0;
  for (std::size_t k = 0; k < a.nodes.x.size(); ++k)
    s += a.nodes.w[k] * std::exp(cplx(0.0, r * std::cos(a.nodes.x[k] - phi)));
  return s;
}

// shell integral of |E|^q over phi in [lo, hi] with spacing resolving the
// in-window oscillation
double window_mass(const Arc& a, double r, double q, double lo, double hi,
                   double dphi) {
  const int n = std::max(8, static_cast<int>((hi - lo) / dphi)) + 1;
  const double h = (hi - lo) / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    s += w * std::pow(std::abs(eval(a, r, lo + i * h)), q);
  }
  return s * h;
}

// out-of-cone endpoint asymptotics: |E(r, phi)|^2 ~ (rho/r)^2 [1/s_a^2 +
// 1/s_b^2 +- 2/(s_a s_b)], s_* = |sin(theta_* - phi)|.  Returns the
// phi-integral bracket (mid, spread) over [lo, hi].
std::pair<double, double> lobe_mass(const Arc& a, double r, double q, double lo,
                                    double hi) {
  if (hi <= lo) return {0.0, 0.0};
  const int n = 48;
  const double h = (hi - lo) / n;
  double mid = 0.0, up = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    const double phi = lo + i * h;
    const double sa = std::abs(std::sin(0.0 - phi));
    const double sb = std::abs(std::sin(a.len - phi));
    const double ea = 1.0 / std::max(sa, 1e-6) / r;
    const double eb = 1.0 / std::max(sb, 1e-6) / r;
    const double base = a.rho * a.rho * (ea * ea + eb * eb);
    const double cross = a.rho * a.rho * 2.0 * ea * eb;
    mid += w * std::pow(std::min(base, 2.0 * a.rho * a.rho * a.len * a.len),
                        0.5 * q);
    up += w * std::pow(std::min(base + cross, 2.0 * a.rho * a.rho * a.len * a.len),
                       0.5 * q);
  }
  mid *= h;
  up *= h;
  return {0.5 * (mid + up), 0.5 * (up - mid)};
}

// |x|^{-1/2}-type tail estimate on |E(r, phi)|: stationary phase with the
// sharp constant sqrt(2 pi / r) inside the normal cone, endpoint lobes
// ~ 1/(r sin alpha) outside
double envelope(const Arc& a, double r, double alpha) {
  const double total = std::abs(a.rho) * a.len;
  const double rr = std::max(r, 1.0);
  if (alpha <= 0.0)
    return std::min(total,
                    std::abs(a.rho) * (1.05 * std::sqrt(kTwoPi / rr) + 6.0 / rr));
  const double lobe =
      3.0 * std::abs(a.rho) / (rr * std::sin(std::min(alpha, 0.5 * kPi)));
  return std::min(total, lobe);
}

struct ShellPlan {
  double r_full_max;   // below: full-circle uniform phi integration
  double cone_pad(double r, const Arc& a) const {
    return 0.5 * a.len + 4.0 / std::sqrt(r + 1.0) + 16.0 / (r + 1.0);
  }
};

}  // namespace

cplx extension_value(const ArcConfig& cfg, double x1, double x2) {
  const Arc a = make_arc(cfg);
  return eval(a, std::hypot(x1, x2), std::atan2(x2, x1));
}

NormResult extension_lq_norm(const ArcConfig& cfg, double q, double box) {
  if (q < 2.0) throw std::invalid_argument("extension_lq_norm: q >= 2");
  const Arc a = make_arc(cfg);
  const bool full_circle = cfg.j == 0;
  const double rf = cfg.refine ? 0.5 : 1.0;  // refinement halves spacings

  NormResult res;
  res.box = box;

  // radial panels
  const double r_full_max = std::min(box, 256.0);
  double mass = 0.0, bracket = 0.0;
  long long samples = 0;

  // near zone: uniform phi over the whole circle
  {
    const double dr = 0.3 * rf;
    for (double r = 0.5 * dr; r < r_full_max; r += dr) {
      const int nphi = std::max(256, static_cast<int>(4.0 * r / rf));
      double s = 0.0;
      for (int i = 0; i < nphi; ++i)
        s += std::pow(std::abs(eval(a, r, kTwoPi * i / nphi)), q);
      mass += s * (kTwoPi / nphi) * r * dr;
      samples += nphi;
    }
  }

  // far zone: windows around the arc cone and its antipode, endpoint-lobe
  // bracket outside; shells are independent, so they run on a small pool
  if (box > r_full_max && !full_circle) {
    ShellPlan plan{r_full_max};
    std::vector<std::pair<double, double>> shells;  // (rmid, dr)
    double r = r_full_max;
    while (r < box) {
      const double pad = plan.cone_pad(r, a);
      const double beat = a.len * (a.len + pad) + 0.5 * (a.len + pad) * (a.len + pad);
      const double dr = std::min({0.12 * rf / std::max(beat, 1e-9), 0.05 * r, box - r});
      const double drc = std::max(dr, 0.02);
      shells.emplace_back(r + 0.5 * drc, drc);
      r += drc;
    }
    const int nthreads = std::max(1u, std::min(4u, std::thread::hardware_concurrency()));
    std::vector<double> tmass(nthreads, 0.0), tbr(nthreads, 0.0);
    std::vector<long long> tsamp(nthreads, 0);
    auto work = [&](int tid) {
      for (std::size_t si = tid; si < shells.size(); si += nthreads) {
        const auto [rmid, drc] = shells[si];
        const double pad = plan.cone_pad(rmid, a);
        const double dphi =
            kPi / (4.0 * (rmid * std::sin(std::min(a.len + pad, 0.5)) + 8.0)) * rf;
        double shell = 0.0;
        for (double base : {0.0, kPi}) {
          shell += window_mass(a, rmid, q, base - pad, base + a.len + pad, dphi);
          tsamp[tid] += static_cast<long long>((a.len + 2 * pad) / dphi);
        }
        auto [m1, s1] = lobe_mass(a, rmid, q, a.len + pad, kPi - pad);
        auto [m2, s2] = lobe_mass(a, rmid, q, kPi + a.len + pad, kTwoPi - pad);
        shell += m1 + m2;
        tbr[tid] += (s1 + s2) * rmid * drc;
        tmass[tid] += shell * rmid * drc;
      }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(work, t);
    work(0);
    for (auto& th : pool) th.join();
    for (int t = 0; t < nthreads; ++t) {
      mass += tmass[t];
      bracket += tbr[t];
      samples += tsamp[t];
    }
  } else if (box > r_full_max) {
    // full circle, large box: keep uniform integration
    const double dr = 0.35 * rf;
    for (double r = r_full_max; r < box; r += dr) {
      const int nphi = 2048;
      double s = 0.0;
      for (int i = 0; i < nphi; ++i)
        s += std::pow(std::abs(eval(a, r, kTwoPi * i / nphi)), q);
      mass += s * (kTwoPi / nphi) * r * dr;
      samples += nphi;
    }
  }

  // tail beyond the box from the envelope bound
  double tail = 0.0;
  {
    double r = box;
    double dr = 0.05 * box;
    for (int it = 0; it < 400 && r < 1e9; ++it) {
      const double pad = 0.5 * a.len + 4.0 / std::sqrt(r);
      const double in_cone = std::pow(envelope(a, r, 0.0), q) * 2.0 * (a.len + 2 * pad);
      const int na = 24;
      double out = 0.0;
      for (int i = 0; i < na; ++i) {
        const double alpha = pad + (kPi - 2 * pad) * (i + 0.5) / na;
        out += std::pow(envelope(a, r, alpha), q) * (kPi - 2 * pad) / na;
      }
      tail += (in_cone + 2.0 * out) * r * dr;
      r += dr;
      dr *= 1.08;
    }
  }

  res.tail_fraction = tail / std::max(mass, 1e-300);
  if (res.tail_fraction > 0.10)
    throw std::invalid_argument(
        "extension_lq_norm: box too small; tail bound exceeds 10% of the "
        "computed mass (tail fraction " +
        std::to_string(res.tail_fraction) + ")");
  res.norm = std::pow(mass, 1.0 / q);
  res.bracket_spread = bracket / std::max(mass, 1e-300);
  res.samples = samples;
  return res;
}

double sweep_box(int j, double q) {
  // past the Knapp tube (~2^{2j}) and far enough into the dispersive region
  // that the |x|^{-1/2} tail estimate puts the remainder under 10%
  const double tube = std::ldexp(1.0, 2 * j);  // 2^{2j}
  return std::max(64.0, (q <= 6.0 ? 256.0 : 64.0) * tube);
}

std::pair<ExponentFit, ExponentFit> knapp_no_gain_check(int jmax) {
  if (jmax < 3 || jmax > 6)
    throw std::invalid_argument(
        "knapp_no_gain_check: jmax in [3, 6] (slope fits need three points)");
  std::vector<std::pair<double, double>> p6, p8;
  for (int j = 1; j <= jmax; ++j) {
    ArcConfig cfg;
    cfg.j = j;
    cfg.nodes = 64;
    cfg.normalized = true;
    auto n6 = extension_lq_norm(cfg, 6.0, sweep_box(j, 6.0));
    auto n8 = extension_lq_norm(cfg, 8.0, sweep_box(j, 8.0));
    p6.emplace_back(j, std::log2(n6.norm));
    p8.emplace_back(j, std::log2(n8.norm));
  }
  return {fit_slope(p6), fit_slope(p8)};
}

}  // namespace speclab::restr
