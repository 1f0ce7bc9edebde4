#include "speclab/calderon.hpp"

#include <cmath>
#include <stdexcept>

#include "speclab/fft.hpp"
#include "speclab/grid.hpp"
#include "speclab/rng.hpp"

namespace speclab::kern {

namespace {

// periodized kernel samples, sum_k 1/(1 + (r + k len)^2)
std::vector<double> kernel_samples(double len, int n) {
  std::vector<double> k(n);
  for (int i = 0; i < n; ++i) {
    double r = i * len / n;
    if (r >= len / 2.0) r -= len;
    double s = 0.0;
    for (int w = -40; w <= 40; ++w) {
      const double t = r + w * len;
      s += 1.0 / (1.0 + t * t);
    }
    // tail of the wrap sum: sum_{|w|>40} 1/(w len)^2 ~ 2/(40.5 len^2)
    s += 2.0 / (40.5 * len * len);
    k[i] = s;
  }
  return k;
}

std::vector<cplx> kernel_multiplier(double len, int n) {
  auto k = kernel_samples(len, n);
  std::vector<cplx> m(n);
  for (int i = 0; i < n; ++i) m[i] = k[i];
  fft::dft1(m.data(), n, -1);
  const double h = len / n;
  for (auto& z : m) z *= h;  // quadrature of int k(r) e^{-ir xi} dr
  return m;
}

std::vector<double> convolve(const std::vector<double>& f, const std::vector<cplx>& mult,
                             double /*len*/) {
  const int n = static_cast<int>(f.size());
  std::vector<cplx> buf(n);
  for (int i = 0; i < n; ++i) buf[i] = f[i];
  fft::dft1(buf.data(), n, -1);
  for (int i = 0; i < n; ++i) buf[i] *= mult[i];
  fft::dft1(buf.data(), n, +1);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = buf[i].real() / n;
  return out;
}

}  // namespace

double unweighted_conv_norm(double len, int n) {
  auto m = kernel_multiplier(len, n);
  double mx = 0.0;
  for (const auto& z : m) mx = std::max(mx, std::abs(z));
  return mx;
}

std::vector<double> random_lipschitz_weight(double len, int n, std::uint64_t seed) {
  Rng rng(seed);
  const int knots = 12;
  // slopes in [-1, 1], recentred so the piecewise-linear path closes on the
  // circle (periodic realization); clamping at 1 preserves both hypotheses
  std::vector<double> slope(knots);
  double mean = 0.0;
  for (auto& s : slope) {
    s = rng.uniform(-1.0, 1.0);
    mean += s;
  }
  mean /= knots;
  double mx = 1.0;
  for (auto& s : slope) {
    s -= mean;
    mx = std::max(mx, std::abs(s));
  }
  for (auto& s : slope) s /= mx;
  const double offset = rng.uniform(1.0, 100.0);
  const double seg = len / knots;
  std::vector<double> knot_val(knots + 1);
  knot_val[0] = offset;
  for (int k = 0; k < knots; ++k) knot_val[k + 1] = knot_val[k] + seg * slope[k];
  std::vector<double> w(n);
  const double h = len / n;
  for (int i = 0; i < n; ++i) {
    const double r = i * h;
    const int k = std::min(knots - 1, static_cast<int>(r / seg));
    const double t = (r - k * seg) / seg;
    w[i] = std::max(1.0, knot_val[k] * (1.0 - t) + knot_val[k + 1] * t);
  }
  return w;
}

CalderonResult calderon_weighted_check(const std::vector<double>& weight,
                                       double len, int trials,
                                       std::uint64_t seed) {
  const int n = static_cast<int>(weight.size());
  if (n < 16) throw std::invalid_argument("calderon: weight too short");
  const double h = len / n;
  for (int i = 0; i < n; ++i) {
    if (weight[i] < 1.0)
      throw std::invalid_argument("calderon: weight must satisfy M >= 1");
    const int j = (i + 1) % n;
    // periodic neighbour distance is h except at the wrap, where the
    // distance is still h on the circle
    if (std::abs(weight[j] - weight[i]) > h * (1.0 + 1e-9))
      throw std::invalid_argument("calderon: weight violates the Lipschitz bound");
  }
  auto mult = kernel_multiplier(len, n);
  Rng rng(seed);
  CalderonResult res;
  res.unweighted = unweighted_conv_norm(len, n);
  res.trials = trials;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> f(n);
    for (auto& v : f) v = rng.gaussian();
    auto kf = convolve(f, mult, len);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
      num += kf[i] * kf[i] * weight[i];
      den += f[i] * f[i] * weight[i];
    }
    if (den == 0.0) throw std::invalid_argument("calderon: zero field");
    res.ratio = std::max(res.ratio, std::sqrt(num / den));
  }
  return res;
}

}  // namespace speclab::kern
