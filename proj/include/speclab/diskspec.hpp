// Exact disk eigenmodes via Bessel functions; whispering-gallery
// concentration, L^q growth ratios, spectral clusters and operator-norm
// lower bounds.  All L^q norms use the probability-normalized area measure
// dA/pi on the unit disk, so q -> ||u||_q is nondecreasing.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "speclab/bessel.hpp"
#include "speclab/grid.hpp"

namespace speclab::disk {

using bessel::Bc;

struct DiskMode {
  int m = 0;       // angular order >= 0
  int k = 1;       // radial index >= 1
  Bc bc = Bc::dirichlet;
  double zero = 0.0;    // j_{m,k} (dirichlet) or k-th positive zero of J_m'
  double lambda = 0.0;  // eigenvalue parameter (= zero)
  double norm = 0.0;    // N with u = N J_m(zero r) e^{im theta}, ||u||_2 = 1
};

DiskMode make_mode(int m, int k, Bc bc);

// u(r, theta); points must satisfy r <= 1 (closed disk).
cplx mode_eval(const DiskMode& mode, double r, double theta);
std::vector<cplx> mode_eval(const DiskMode& mode,
                            const std::vector<std::pair<double, double>>& pts);

// Smallest w such that the annulus [1-w, 1] holds >= mass of the L^2 mass.
struct WidthResult {
  double width = 0.0;
  double captured = 0.0;  // quadrature estimate of the captured fraction
};
WidthResult concentration_width(const DiskMode& mode, double mass);

// ||u||_q / ||u||_2 (== ||u||_q for normalized modes).  q in [2, inf];
// pass q = infinity for the sup.  nodes == 0 chooses max(400, 6 lambda);
// an explicit node count must resolve >= 10 points per wavelength.
double mode_lq_ratio(const DiskMode& mode, double q, int nodes = 0);

struct SpectralCluster {
  double lambda = 0.0;  // window [lambda, lambda+1]
  Bc bc = Bc::dirichlet;
  std::vector<DiskMode> modes;
  std::vector<cplx> coefficients;  // empty until assigned; l2-normalized
};

// Complete enumeration of modes with zero in [lambda, lambda+1] (m >= 0
// representatives; each m > 0 eigenvalue is doubly degenerate on the disk).
SpectralCluster cluster_members(double lambda, Bc bc);

// || sum_i c_i u_i ||_q for an l2-normalized coefficient vector.
double cluster_lq_norm(const SpectralCluster& cl, const std::vector<cplx>& coeffs,
                       double q);

// Certified lower bound on ||chi_lambda||_{L2 -> Lq}: max over random unit
// coefficient vectors plus two structured candidates (all mass on the
// whispering mode; coherent point-focus phases).
struct OpNormEstimate {
  double value = 0.0;
  std::string candidate;  // "random" | "whisper" | "focus"
  double random_best = 0.0;
  double whisper = 0.0;
  double focus = 0.0;
  int members = 0;
};
OpNormEstimate cluster_opnorm(double lambda, double q, int trials,
                              std::uint64_t seed);

}  // namespace speclab::disk
