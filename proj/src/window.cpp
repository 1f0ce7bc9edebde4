#include "speclab/window.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "speclab/fft.hpp"
#include "speclab/bump.hpp"
#include "speclab/grid.hpp"
#include "speclab/quad.hpp"

namespace speclab::wp {

namespace {

// Scale-free radial profile G0(v), the 2-D inverse transform of bump(|zeta|)
// at radius v, so that g(z) = A c^2 G0(c |z|).  Computed through the
// projection-slice theorem: G0(v) = (2pi)^{-2} FT_1D[Abel projection](v),
// with the Abel projection P(t) = int bump(sqrt(t^2 + s^2)) ds smooth and
// compactly supported, so one padded FFT gives the whole profile to machine
// accuracy.  |G0| falls below 1e-13 of G0(0) near v ~ 500.
struct ProfileTable {
  double dv = 0.0;
  double vmax = 560.0;
  std::vector<double> val;

  explicit ProfileTable(bool squared = false) {
    const int m = 4096;              // samples of P over [-1, 1)
    const std::size_t n = 1 << 21;   // zero-padded FFT length
    const double dt = 2.0 / m;
    dv = kTwoPi / (n * dt);
    const int nq = 240;
    auto gr = gauss_legendre(nq, 0.0, 1.0);
    std::vector<cplx> buf(n, cplx(0.0));
    for (int j = 0; j < m; ++j) {
      const double t = -1.0 + j * dt;
      const double smax = 1.0 - t * t;
      if (smax <= 0.0) continue;
      const double half = std::sqrt(smax);
      double p = 0.0;
      for (int i = 0; i < nq; ++i) {
        const double s = half * gr.x[i];
        const double bv = bump::profile(std::hypot(t, s));
        p += (squared ? bv * bv : bv) * half * gr.w[i];
      }
      buf[j] = 2.0 * p;
    }
    fft::dft1(buf.data(), static_cast<int>(n), -1);
    const std::size_t keep = static_cast<std::size_t>(vmax / dv) + 4;
    val.resize(keep);
    for (std::size_t k = 0; k < keep; ++k) {
      const double v = k * dv;
      const cplx z = dt * std::exp(cplx(0.0, v)) * buf[k];
      val[k] = z.real() / (kTwoPi * kTwoPi);
    }
  }

  double operator()(double v) const {
    if (v >= vmax) return 0.0;
    const double u = v / dv;
    const int j = static_cast<int>(u);
    const double t = u - j;
    // cubic interpolation (Catmull-Rom)
    const double p0 = val[j > 0 ? j - 1 : 1];
    const double p1 = val[j];
    const double p2 = val[j + 1 < static_cast<int>(val.size()) ? j + 1 : j];
    const double p3 = val[j + 2 < static_cast<int>(val.size()) ? j + 2 : j];
    const double a = 0.5 * (-p0 + 3 * p1 - 3 * p2 + p3);
    const double bq = p0 - 2.5 * p1 + 2 * p2 - 0.5 * p3;
    const double cq = 0.5 * (p2 - p0);
    return ((a * t + bq) * t + cq) * t + p1;
  }
};

const ProfileTable& profile_table() {
  static ProfileTable table;
  return table;
}

// same construction for the autocorrelation profile, driven by bump^2
struct AutocorrTable : ProfileTable {
  AutocorrTable() : ProfileTable(true) {}
};

const ProfileTable& autocorr_table() {
  static AutocorrTable table;
  return table;
}

double bump2_radial_moment() {  // int_0^1 bump(u)^2 u du
  static double cached = [] {
    auto gr = gauss_legendre(800, 0.0, 1.0);
    double s = 0.0;
    for (int i = 0; i < 800; ++i) {
      const double b = bump::profile(gr.x[i]);
      s += b * b * gr.x[i] * gr.w[i];
    }
    return s;
  }();
  return cached;
}

}  // namespace

double Window::ghat_radial(double rho) const {
  if (rho >= c) return 0.0;
  return amp * bump::profile(rho / c);
}

double Window::ghat(double z2, double z3) const {
  return ghat_radial(std::hypot(z2, z3));
}

double Window::g_radial(double r) const {
  return amp * c * c * profile_table()(c * r);
}

double Window::support_radius(double eps) const {
  const auto& tab = profile_table();
  const double g00 = tab(0.0);
  int j = static_cast<int>(tab.val.size()) - 1;
  while (j > 0 && std::abs(tab.val[j]) <= eps * g00) --j;
  return (j + 1) * tab.dv / c;
}

double Window::autocorr_radial(double r) const {
  return amp * amp * c * c * autocorr_table()(c * r);
}

double Window::l2_norm() const {
  // ||g||_2^2 = (2pi)^{-2} ||ghat||_2^2 = (2pi)^{-2} 2pi A^2 c^2 I2
  return std::sqrt(amp * amp * c * c * bump2_radial_moment() / kTwoPi);
}

Window make_window(double c) {
  if (c <= 0.0 || c > 0.25)
    throw std::invalid_argument("make_window: c must lie in (0, 1/4]");
  Window w;
  w.c = c;
  w.amp = 1.0 / std::sqrt(kTwoPi * c * c * bump2_radial_moment());
  return w;
}

}  // namespace speclab::wp
