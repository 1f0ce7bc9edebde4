// Assembly of the kernel K(r, x'; s, y') of W W* by quadrature, its decay
// against the cosphere bound model, and Schur row masses.
//
// Structure exploited by the quadrature: the symbol has no x3-dependence, so
// zeta3 is conserved and the flow acts as (z2, zeta) -> (z2_f, zeta_f) plus a
// z3 shift delta3(z2, zeta).  The z3 integral then becomes a correlation of
// window sections, and with uniform zeta3/omega grids (spacings coupled by an
// integer ratio) the whole y3-row of kernel values is synthesized from one
// pass over the quadrature nodes.
#pragma once

#include <memory>
#include <vector>

#include "speclab/dyadic.hpp"
#include "speclab/geometry.hpp"
#include "speclab/hamflow.hpp"
#include "speclab/window.hpp"

namespace speclab::kern {

struct KernelConfig {
  double mu = 64.0;
  double theta = 0.5;
  double r = 0.0, s = 0.0;
  dyadic::Member beta;     // sector cutoff in zeta
  wp::Window window;
  const geom::MetricModel* metric = nullptr;  // extended model
  double trunc_c = 1.0;    // symbol truncation constant
  int refine = 0;          // 0 = base quadrature, 1 = refined
  bool force_general = false;  // bypass the straight-flow fast path (tests)
};

// One (r, s) assembly; reusable across pairs and rows.
class KernelAssembly {
 public:
  explicit KernelAssembly(const KernelConfig& cfg);
  ~KernelAssembly();
  KernelAssembly(KernelAssembly&&) noexcept;

  // K at a single pair (x', y').
  cplx value(double x2, double x3, double y2, double y3) const;
  // |K| along a y3 row at fixed (x', y2).
  std::vector<cplx> row(double x2, double x3, double y2,
                        const std::vector<double>& y3s) const;

  // flowed base point and unit covector for the bound model, from the
  // sector's center frequency
  void cosphere_point(double x2, double x3, double* x_sr, double* nu_sr) const;
  bool analytic_flow() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct PairSample {
  double x2, x3, y2, y3;
  cplx value;
  double bound_model;  // (1 + mu thetabar |y - x_sr| + mu |<nu, y - x_sr>|)^{-N}
};

struct KernelSample {
  double mu = 0.0, theta = 0.0, theta_bar = 0.0;
  double r = 0.0, s = 0.0;
  int bound_N = 4;
  std::vector<PairSample> pairs;
  bool converged = false;    // refinement changed values by <= 5%
  double refine_delta = 0.0; // relative change under refinement
};

// theta_bar of Theorem 5.4 form: min(theta, (mu |r-s|)^{-1/2}), floored at
// mu^{-1/2}.
double theta_bar(double mu, double theta, double dt);

// Kernel values with paired bound-model evaluations and a one-level
// refinement convergence flag.  Throws if the refinement moves the largest
// values by more than 5%.
KernelSample assemble_kernel(const KernelConfig& cfg,
                             const std::vector<std::array<double, 4>>& pairs);

struct RowMass {
  double mass = 0.0;        // int |K| dy3
  double bound = 0.0;       // mu theta (1 + mu theta^2 |r-s|)^{-1/2}
  double tail_fraction = 0.0;
  double peak = 0.0;
  int samples = 0;
};

// CSV rows (mu, theta, r, s, x', y', |K|, bound model, ratio).
std::string kernel_sample_csv(const KernelSample& ks);

// sup-style row mass at fixed (x', y2): quadrature of |K| over an adaptive
// y3 line centered at the flowed point.  Pass y2 = NaN to place the line at
// the flowed base point (the sup configuration).  Errors out if the line
// cannot be extended until the endpoint values fall below 2% of the peak.
RowMass schur_row_mass(const KernelConfig& cfg, double x2, double x3, double y2);

}  // namespace speclab::kern
