// The wave packet window: real, radial, with compactly supported Fourier
// transform ghat(zeta) = A exp(-1/(1 - |zeta/c|^2)) on |zeta| < c, normalized
// so ||g||_{L2(R^2)} = (2pi)^{-1}.
#pragma once

namespace speclab::wp {

struct Window {
  double c = 0.25;   // Fourier support radius, in (0, 1/4]
  double amp = 0.0;  // A

  double ghat_radial(double rho) const;        // A * bump(rho/c), 0 outside
  double ghat(double z2, double z3) const;
  // spatial profile g(r) via the cached radial inverse transform table
  double g_radial(double r) const;
  double g0() const { return g_radial(0.0); }
  // radius beyond which |g| <= eps * g(0) (from the table envelope)
  double support_radius(double eps) const;
  // 2-D autocorrelation (g * g)(u) = int g(w) g(w - u) dw at radius u
  double autocorr_radial(double r) const;
  // accurate ||g||_{L2(R^2)} from the Fourier side
  double l2_norm() const;
};

Window make_window(double c);

}  // namespace speclab::wp
