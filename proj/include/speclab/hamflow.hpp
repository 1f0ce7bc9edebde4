// Hamiltonian flow of the rescaled symbol q(x, zeta') = theta p_j(theta x,
// zeta'/theta) and its variational (Jacobian) system.  Convention: x1 is the
// evolution variable and
//   dz/dx1 = -d_zeta q,   dzeta/dx1 = +d_z q,
// the bicharacteristic flow of xi1 - q(x, xi').
#pragma once

#include <array>
#include <vector>

#include "speclab/geometry.hpp"

namespace speclab::flow {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;
using Mat4 = std::array<std::array<double, 4>, 4>;

struct SymbolDerivs {
  double q = 0.0;
  Vec2 dz{};          // (d/dz2, d/dz3); z3-derivative vanishes structurally
  Vec2 dzeta{};
  Mat2 dzz{};         // d^2/dz dz
  Mat2 dzzeta{};      // d^2/dz dzeta (rows z, cols zeta)
  Mat2 dzetazeta{};
};

// q built from a truncated SymbolModel at scale lambda with angle theta
// (mu = theta * lambda).  In homogeneous mode the degree-1 extension
// |zeta| q(x, mu zeta/|zeta|)/mu is used, matching q on the working shell.
struct RescaledSymbol {
  double theta = 1.0;
  double lambda = 0.0;
  double mu = 0.0;
  bool homogeneous = false;
  geom::SymbolModel sym;  // truncated
  int row = 0;            // x1 row of the W series in use

  SymbolDerivs eval(double x1, const Vec2& z, const Vec2& zeta) const;
};

// Builds the symbol chain: metric -> symbol at lambda -> truncation at
// trunc_c * theta^{-1/2} lambda^{1/2} -> rescale by theta.
RescaledSymbol make_rescaled_symbol(const geom::MetricModel& extended,
                                    double lambda, double theta,
                                    bool homogeneous, double trunc_c = 1.0);

struct PhasePoint {
  Vec2 z{}, zeta{};
};

struct FlowPoint {
  PhasePoint start;
  PhasePoint end;
  Mat4 jacobian{};       // d(z, zeta)_{s,r} / d(z, zeta), when requested
  Mat2 int_dzetazeta{};  // int_r^s d^2_zeta q(t, flow(t)) dt
  int steps = 0;
  double err_estimate = 0.0;
};

struct FlowMap {
  double r = 0.0, s = 0.0;
  bool has_jacobian = false;
  std::vector<FlowPoint> points;
};

// Integrate seeds from x1 = r to x1 = s (|s - r| <= 1; r, s in [-1, 1]).
// Local error per step <= tol; step halving engages near the x2 = 0 kink.
FlowMap flow(const RescaledSymbol& q, const std::vector<PhasePoint>& seeds,
             double r, double s, double tol = 1e-10);

// Same, with the 4x4 variational system integrated alongside.
FlowMap variational_flow(const RescaledSymbol& q,
                         const std::vector<PhasePoint>& seeds, double r,
                         double s, double tol = 1e-10);

// Checks on a FlowPoint with Jacobian.
double symplectic_defect(const Mat4& J);  // max entry of J^T Omega J - Omega
double det4(const Mat4& J);

// Measured suprema over a seed set, scaled by the bound shapes of the flow
// derivative estimates; all entries should be O(1) uniformly over (mu,
// theta, |s-r|).
struct DerivativeReport {
  double mu = 0.0, theta = 0.0, dt = 0.0;  // dt = |s - r|
  // first order: |d_z z - I|/|s-r|, |d_zeta z|/|s-r|, |d_zeta zeta - I|/|s-r|,
  // |d_z zeta|
  double r_dz_z = 0.0, r_dzeta_z = 0.0, r_dzeta_zeta = 0.0, r_dz_zeta = 0.0;
  // second order: |d2_z z|/<mu^{1/2}dt>, |d2_z zeta|/mu^{1/2},
  // |d_z d_zeta z|/(dt <mu^{1/2}dt>), |d_z d_zeta zeta|/<mu^{1/2}dt>
  double r_dzz_z = 0.0, r_dzz_zeta = 0.0, r_dzzeta_z = 0.0, r_dzzeta_zeta = 0.0;
  // pure zeta derivatives k = 2, 3: (|dk_zeta z| + |dk_zeta zeta|) /
  // (dt <mu^{1/2}dt>^{k-1})
  double r_k2 = 0.0, r_k3 = 0.0;
};
DerivativeReport flow_derivative_report(const RescaledSymbol& q,
                                        const std::vector<PhasePoint>& seeds,
                                        double r, double s, double tol = 1e-10);

// sup over seeds of |d_zeta z_{s,r} + int_r^s d^2_zeta q dt| / |s-r|^2
// (the integral carries a minus in this flow convention).
double corollary_discrepancy(const RescaledSymbol& q,
                             const std::vector<PhasePoint>& seeds, double r,
                             double s, double tol = 1e-10);

// Deterministic seed sets on the working cone zeta3 ~ 1, zeta2 ~ theta.
std::vector<PhasePoint> cone_seeds(double theta, int count, std::uint64_t seed);

// CSV serialization: one row per seed with endpoint and Jacobian entries.
std::string flowmap_csv(const FlowMap& fm);
void save_flowmap(const FlowMap& fm, const std::string& path);

}  // namespace speclab::flow
