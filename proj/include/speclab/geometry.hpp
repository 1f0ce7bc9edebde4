// Metric models in boundary normal coordinates, even/odd extension across
// x2 = 0, and the factorization symbol p(x, xi') with frequency truncation.
#pragma once

#include <string>
#include <vector>

#include "speclab/bump.hpp"
#include "speclab/grid.hpp"

namespace speclab::geom {

enum class Profile { flat, disk, custom };

// Grid over (x1, x2).  x1 is periodic on [-L1/2, L1/2); x2 starts at 0 on the
// half grid and covers [-X2, X2) once extended.
struct MetricModel {
  Profile profile = Profile::flat;
  double c0 = 0.1;
  Grid1 x1;                 // periodic
  Grid1 x2;                 // half: [0, X2]; extended: [-X2, X2)
  std::vector<double> rho;  // row-major, index = i1 * x2.n + i2
  std::vector<double> g11;  // inverse metric coefficient g^{11}; g^{22} == 1
  bool extended = false;

  // measured by extend_even
  double lipschitz_g11 = 0.0;     // sup of first differences / h
  double second_diff_at_0 = 0.0;  // sup over x1 of centered second difference

  double rho_sample(int i1, int i2) const { return rho[i1 * x2.n + i2]; }
  double g11_sample(int i1, int i2) const { return g11[i1 * x2.n + i2]; }

  // Analytic field evaluation (even in x2 by construction).
  double rho_at(double x1v, double x2v) const;
  double g11_at(double x1v, double x2v) const;
  // W = g11^{-1/2}, the x-profile the symbol factors through.
  double W_at(double x1v, double x2v) const;
};

// Pre-blend disk formulas (unit disk near its boundary, r = 1 - x2):
// dual metric g_{11} = (1 - x2)^2, inverse g^{11} = (1 - x2)^{-2}.
double disk_g11_dual_raw(double x2);
double disk_g11_raw(double x2);
double disk_rho_raw(double x2);

// Build a model on the half grid x2 >= 0.  Grid must contain the boundary row
// x2 = 0; c0 in (0, 1/2).
MetricModel build_model_metric(Profile p, Grid1 gx1, Grid1 gx2, double c0);

// Even reflection of rho, g11 onto the doubled grid x2 in [-X2, X2), exact at
// grid points.  Records measured Lipschitz constant and the centered second
// difference at x2 = 0.
MetricModel extend_even(const MetricModel& m);

enum class Parity { odd, even };

// Reflect a scalar data field sampled on the half x2 grid onto the doubled
// grid.  Odd parity requires |f(x1, 0)| <= trace_tol (Dirichlet trace).
std::vector<double> extend_data(const std::vector<double>& f, const Grid1& gx1,
                                const Grid1& gx2, Parity parity,
                                double trace_tol = 1e-10);

// --------------------------------------------------------------------------
// Factorization symbol.  Globally p(x, xi') = A(xi') W(x) + B(xi') with
//   A = chi_hyp(xi') sqrt(xi3^2 - xi2^2),   B = (1 - chi_hyp(xi')) m(|xi'|),
// where chi_hyp == 1 on {|xi2| <= lambda/9, xi3 in [lambda/3, 3 lambda]} and
// vanishes outside (-lambda/8, lambda/8) x (lambda/4, 4 lambda), and m is a
// smooth version of max(1, |xi'|).  Truncation acts on W alone, so the
// truncated symbol is exactly band-limited in x.
struct XiDerivs {
  double v = 0.0;          // value
  double d2 = 0.0, d3 = 0.0;           // d/dxi2, d/dxi3
  double d22 = 0.0, d23 = 0.0, d33 = 0.0;  // second derivatives
};

struct SymbolModel {
  double lambda = 0.0;
  double cutoff = 0.0;  // 0 => untruncated
  MetricModel metric;   // extended model

  bump::Plateau chi2;   // xi2 window
  bump::Plateau chi3;   // xi3 window

  // Per-x1-row cosine series of W on [0, X2] (even in x2): W(x2) =
  // sum_k w[k] cos(k pi x2 / X2).  Truncated rows drop modes above cutoff.
  int n_half = 0;                      // series length - 1
  std::vector<std::vector<double>> wrow;  // size x1.n, each n_half+1

  double p(double x1, double x2, double xi2, double xi3) const;
  // A, B and xi-derivatives at (xi2, xi3)
  XiDerivs A(double xi2, double xi3) const;
  XiDerivs B(double xi2, double xi3) const;
  // W and x2-derivatives from the series, at arbitrary (x1 row, x2)
  double W(int row, double x2) const;
  double W_d1(int row, double x2) const;
  double W_d2(int row, double x2) const;
  int row_of(double x1) const;  // nearest x1 grid row

  bool row_uniform_center() const;  // true if rows near x1=0 coincide
};

// Build the (untruncated) symbol at frequency scale lambda >= 4 from an
// extended metric model.  Verifies the factorization identity
// a11 (xi1^2 - p^2) = sum a^{jj} xi_j^2 to 1e-10 relative on the hyperbolic
// region; throws on failure.
SymbolModel build_symbol(const MetricModel& m, double lambda);

// Smooth radial truncation of x'-frequencies at `cutoff` (rolloff width
// cutoff/4, multiplier vanishing at |xi| >= cutoff).  cutoff must not exceed
// the grid Nyquist.
SymbolModel truncate_symbol(const SymbolModel& s, double cutoff);

// Self-describing text serialization.
void save_metric(const MetricModel& m, const std::string& path);
MetricModel load_metric(const std::string& path);

}  // namespace speclab::geom
