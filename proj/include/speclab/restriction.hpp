// Circle restriction/extension experiments: L^q norms of the extension of an
// arc density, and the small-angle Knapp contrast between q = 6 and q = 8.
#pragma once

#include <utility>

#include "speclab/fit.hpp"
#include "speclab/grid.hpp"

namespace speclab::restr {

// Arc of length 2^{-j} starting at angle 0, with constant density
// (1 if !normalized, arclen^{-1/2} if normalized, so ||rho||_{L2(arc)} = 1).
// j = 0 denotes the full circle.
struct ArcConfig {
  int j = 1;
  int nodes = 64;       // Gauss nodes on the arc (>= 16)
  bool normalized = true;
  int refine = 0;       // quadrature refinement level
};

// E(x) = int_arc e^{i x . (cos th, sin th)} rho(th) dth
cplx extension_value(const ArcConfig& arc, double x1, double x2);

struct NormResult {
  double norm = 0.0;            // L^q norm over |x| <= box
  double box = 0.0;
  double tail_fraction = 0.0;   // certified bound on discarded q-mass / total
  double bracket_spread = 0.0;  // relative spread of the out-of-cone bracket
  long long samples = 0;
};

// L^q(|x| <= box) norm of E by scale-adapted polar quadrature.  Preconditions:
// >= 16 arc nodes; the |x|^{-1/2}-type tail bound must put the discarded mass
// below 10% of the computed q-th power mass (throws otherwise).
NormResult extension_lq_norm(const ArcConfig& arc, double q, double box);

// Default box for the small-angle sweeps: large enough that the Knapp tube
// (length ~ 2^{2j}) is captured with a j-independent fraction.
double sweep_box(int j, double q);

// Sweeps j = 1..jmax at q = 6 and q = 8 with L2-normalized densities and
// returns the two log2(norm)-vs-j fits (expected slopes ~0 and ~-1/8).
std::pair<ExponentFit, ExponentFit> knapp_no_gain_check(int jmax);

}  // namespace speclab::restr
