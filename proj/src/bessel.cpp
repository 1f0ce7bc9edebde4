#include "speclab/bessel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace speclab::bessel {

namespace {

// Ascending series; reliable in double for x <= ~12 where cancellation in the
// alternating sum stays below ~1e-13 absolute.
double series(int m, double x) {
  double term = 1.0;
  for (int i = 1; i <= m; ++i) term *= 0.5 * x / i;
  const double q = -0.25 * x * x;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (k * (m + k));
    sum += term;
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-30)) break;
  }
  return sum;
}

// Backward (Miller) recurrence from a start order well above both m and x,
// normalized with J_0 + 2*sum_{k>=1} J_{2k} = 1.
std::vector<double> miller(int mmax, double x) {
  const double xm = std::max(static_cast<double>(mmax), x);
  const int start = mmax + 2 +
                    static_cast<int>(std::max(0.0, x - mmax)) +
                    static_cast<int>(16.0 * std::cbrt(xm + 1.0)) + 24;
  std::vector<double> out(mmax + 1, 0.0);
  double fp = 0.0;      // f_{k+1}
  double fc = 1e-280;   // f_k, arbitrary small seed
  double norm = 0.0;
  for (int k = start; k >= 1; --k) {
    const double fm = (2.0 * k / x) * fc - fp;
    fp = fc;
    fc = fm;
    if (k - 1 <= mmax) out[k - 1] = fc;
    if (k <= mmax) {
      // out already holds unnormalized values; nothing else here
    }
    if ((k - 1) % 2 == 0) norm += (k - 1 == 0 ? 1.0 : 2.0) * fc;
    if (std::abs(fc) > 1e250) {  // rescale to avoid overflow
      const double s = 1e-250;
      fc *= s;
      fp *= s;
      norm *= s;
      for (auto& v : out) v *= s;
    }
  }
  for (auto& v : out) v /= norm;
  return out;
}

}  // namespace

double J(int m, double x) {
  if (m < 0 || x < 0.0) throw std::invalid_argument("bessel: m >= 0, x >= 0");
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;
  if (x <= 12.0 && m <= 40) return series(m, x);
  return miller(m, x)[m];
}

std::vector<double> J_all(int mmax, double x) {
  if (x == 0.0) {
    std::vector<double> v(mmax + 1, 0.0);
    v[0] = 1.0;
    return v;
  }
  return miller(mmax, x);
}

double Jp(int m, double x) {
  if (m == 0) return -J(1, x);
  if (x == 0.0) return m == 1 ? 0.5 : 0.0;
  auto v = J_all(m + 1, x);
  return 0.5 * (v[m - 1] - v[m + 1]);
}

namespace {

// Second derivative from the Bessel ODE, used in Newton steps for J_m' zeros.
double Jpp(int m, double x) {
  return -Jp(m, x) / x + (static_cast<double>(m) * m / (x * x) - 1.0) * J(m, x);
}

struct Fn {
  int m;
  Bc bc;
  double f(double x) const { return bc == Bc::dirichlet ? J(m, x) : Jp(m, x); }
  double df(double x) const { return bc == Bc::dirichlet ? Jp(m, x) : Jpp(m, x); }
};

// Airy-expansion guess for the first zero, McMahon for high zeros.
double first_zero_guess(int m, Bc bc) {
  const double mm = static_cast<double>(m);
  if (bc == Bc::dirichlet) {
    if (m == 0) return 2.404825557695773;
    const double c = std::cbrt(mm);
    return mm + 1.8557571 * c + 1.033150 / c - 0.00397 / mm;
  }
  if (m == 0) return 3.831705970207512;  // first positive zero of J_0' (= j_{1,1})
  const double c = std::cbrt(mm);
  return mm + 0.8086165 * c + 0.072490 / c - 0.05097 / mm;
}

double refine(const Fn& fn, double lo, double hi) {
  // bisection to a tight bracket, then Newton polish
  double flo = fn.f(lo), fhi = fn.f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) {
    std::ostringstream os;
    os << "bessel zero: bracket [" << lo << ", " << hi << "] has f=" << flo
       << ", " << fhi << " (m=" << fn.m << ")";
    throw std::runtime_error(os.str());
  }
  for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fn.f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  double z = 0.5 * (lo + hi);
  for (int it = 0; it < 60; ++it) {
    const double fz = fn.f(z);
    const double dz = fz / fn.df(z);
    const double znew = z - dz;
    if (znew > lo - 1.0 && znew < hi + 1.0) z = znew;
    if (std::abs(dz) < 1e-14 * z) break;
  }
  if (std::abs(fn.f(z)) > 1e-12) {
    std::ostringstream os;
    os << "bessel zero: residual " << fn.f(z) << " at z=" << z
       << " exceeds 1e-12 (m=" << fn.m << ")";
    throw std::runtime_error(os.str());
  }
  return z;
}

// March right from x0 until a sign change of f, step <= 1.0.
std::pair<double, double> bracket_next(const Fn& fn, double x0) {
  double step = 0.5;
  double a = x0, fa = fn.f(a);
  while (std::abs(fa) < 1e-13) {  // sitting on a zero; nudge
    a += 1e-6;
    fa = fn.f(a);
  }
  for (int it = 0; it < 4000; ++it) {
    const double b = a + step;
    const double fb = fn.f(b);
    if (fa * fb <= 0.0) return {a, b};
    a = b;
    fa = fb;
  }
  throw std::runtime_error("bessel zero: marching failed to bracket");
}

}  // namespace

double zero(int m, int k, Bc bc) {
  if (m < 0 || k < 1) throw std::invalid_argument("bessel zero: m >= 0, k >= 1");
  return zeros(m, k, bc).back();
}

std::vector<double> zeros(int m, int count, Bc bc) {
  const Fn fn{m, bc};
  std::vector<double> zs;
  zs.reserve(count);
  // First zero from the asymptotic guess, bracketed locally.
  const double g = first_zero_guess(m, bc);
  double lo = std::max(g - std::max(0.05 * g, 0.5), m > 0 ? 0.9 * m : 0.2);
  auto [a, b] = bracket_next(fn, lo);
  zs.push_back(refine(fn, a, b));
  while (static_cast<int>(zs.size()) < count) {
    auto [c, d] = bracket_next(fn, zs.back() + 0.5);
    zs.push_back(refine(fn, c, d));
  }
  return zs;
}

std::vector<std::pair<int, double>> zeros_in(int m, double lo, double hi, Bc bc) {
  std::vector<std::pair<int, double>> out;
  const Fn fn{m, bc};
  const double g = first_zero_guess(m, bc);
  if (g > hi + 4.0) return out;  // first zero beyond the window (guess err << 4)
  int k = 0;
  double z = 0.0;
  double from = std::max(g - std::max(0.05 * g, 0.5), m > 0 ? 0.9 * m : 0.2);
  while (true) {
    auto [a, b] = bracket_next(fn, from);
    z = refine(fn, a, b);
    ++k;
    if (z > hi) break;
    if (z >= lo) out.emplace_back(k, z);
    from = z + 0.5;
  }
  return out;
}

}  // namespace speclab::bessel
