// The wave packet transform T_mu acting on the x' = (x2, x3) variables,
// realized on a periodic torus of side L.
//
// Discrete realization.  With f(y) = (1/L^2) sum_k fhat_k e^{iky} on the
// torus and xi on the dual lattice (2pi/L) Z^2, the trapezoid-rule transform
//   (T_mu f)(x', xi') = mu^{1/2} h^2 sum_y e^{-i<xi, y-x>} g_per(mu^{1/2}(y-x)) f(y)
// equals, exactly (compact Fourier support of g and band-limited f),
//   (T_mu f)(x', xi') = mu^{-1/2} (1/L^2) sum_k ghat((xi-k)/sqrt(mu)) fhat_k e^{ikx}.
// All norms, adjoints and roundtrips below are computed through this lattice
// form; a literal windowed Riemann sum over the grid reproduces it to
// machine precision (checked in the tests).
#pragma once

#include <cstdint>
#include <vector>

#include "speclab/fit.hpp"
#include "speclab/grid.hpp"
#include "speclab/window.hpp"

namespace speclab::wp {

// Fourier coefficients on the dual lattice of the torus [-L/2, L/2)^2,
// supported on the index box [k2lo, k2lo+n2) x [k3lo, k3lo+n3).
struct SpectralField {
  double L = 0.0;
  int k2lo = 0, k3lo = 0;
  int n2 = 0, n3 = 0;
  std::vector<cplx> coef;  // row-major over (k2, k3)

  double dk() const { return kTwoPi / L; }
  cplx& at(int i2, int i3) { return coef[static_cast<std::size_t>(i2) * n3 + i3]; }
  const cplx& at(int i2, int i3) const {
    return coef[static_cast<std::size_t>(i2) * n3 + i3];
  }
  double freq2(int i2) const { return (k2lo + i2) * dk(); }
  double freq3(int i3) const { return (k3lo + i3) * dk(); }
  double l2_norm() const;              // ||f||_{L2(torus)}
  cplx value_at(double y2, double y3) const;  // pointwise synthesis
};

// Test family builders (deterministic given the seed).
SpectralField gaussian_field(double L, double center2, double center3,
                             double sigma_xi, double trunc_radius);
SpectralField random_bandlimited_field(double L, double center2, double center3,
                                       double radius, std::uint64_t seed);
// Build coefficients from grid samples (FFT); enforces the resolution
// precondition of >= min_per_wavelength samples per 2pi/mu wavelength and
// names the worst axis on failure.
SpectralField spectral_from_grid(const CField& f, double mu,
                                 double min_per_wavelength = 8.0);

// Phase-space samples on an x'-window times a xi'-lattice box.
struct PhaseSpaceField {
  double mu = 0.0;
  double L = 0.0;
  Window window;
  Grid2 xgrid;            // x' sampling window (h <= mu^{-1/2}/4)
  int q2lo = 0, q3lo = 0;  // xi lattice box
  int m2 = 0, m3 = 0;
  std::vector<cplx> values;  // slice-major: [(q2, q3)][(x2, x3)]

  double hxi() const { return kTwoPi / L; }
  std::size_t slices() const { return static_cast<std::size_t>(m2) * m3; }
  cplx* slice(int s2, int s3) {
    return values.data() + (static_cast<std::size_t>(s2) * m3 + s3) * xgrid.size();
  }
  const cplx* slice(int s2, int s3) const {
    return values.data() + (static_cast<std::size_t>(s2) * m3 + s3) * xgrid.size();
  }
  double xi2(int s2) const { return (q2lo + s2) * hxi(); }
  double xi3(int s3) const { return (q3lo + s3) * hxi(); }
  double l2_norm() const;  // sqrt(hx^2 hxi^2 sum |F|^2)
};

// Materialized forward transform on the slice box that covers supp(fhat)
// padded by the window support (pad_bins extra rings).  Memory-guarded; use
// the streaming forms below for norm-level experiments.
PhaseSpaceField forward(const SpectralField& f, double mu, const Window& w,
                        int pad_bins = 2);

// Adjoint quadrature mu^{1/2} sum e^{i<xi,y-x>} g(mu^{1/2}(y-x)) F(x,xi) hx^2 hxi^2
// evaluated in the lattice form; result sampled on the same spectral box as
// `like` for easy comparison.
SpectralField adjoint(const PhaseSpaceField& F, const SpectralField& like);

// Streaming quantities (no 4-D storage):
double transform_norm(const SpectralField& f, double mu, const Window& w);
SpectralField roundtrip(const SpectralField& f, double mu, const Window& w);
// |C_disc - 1|: lattice quadrature defect of the isometry constant.
double isometry_constant_defect(double mu, const Window& w, double L);

// ||<mu^{1/2} x2>^N T_mu f|| / ||<mu^{1/2} x2>^N f||, N in [-3, 3].
double weighted_bound_ratio(const SpectralField& f, double mu, const Window& w,
                            int N);

// T_mu T_mu^* kernel modulus |K(y',eta'; x',xi')| for a displacement
// (dx', dxi') from the diagonal; exact zero once |dxi'| > 2 c mu.
double ttstar_kernel_abs(double mu, const Window& w, double dx2, double dx3,
                         double dxi2, double dxi3);

// Fit of log|K| against log(1 + mu^{-1/2}|dxi| + mu^{1/2}|dx|) over sampled
// displacement pairs; slope is expected <= -4 for the default window.
ExponentFit ttstar_decay_fit(double mu, const Window& w);

// default torus side: keeps >= 24 lattice points across the window support
double default_torus(double mu, const Window& w);

// Self-describing text serialization of a materialized field (mu, window id,
// grids, samples); deterministic given the producing config.
void save_phase_space(const PhaseSpaceField& F, const std::string& path);
PhaseSpaceField load_phase_space(const std::string& path);

}  // namespace speclab::wp
