#include "speclab/bump.hpp"

namespace speclab::bump {

// Below t ~ 1/700 the exponentials denormalize; clamping there changes the
// step by less than 1e-300, far under any tolerance used in this project.
static constexpr double kEdge = 2.0e-3;

double phi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double step(double t) {
  if (t <= kEdge) return 0.0;
  if (t >= 1.0 - kEdge) return 1.0;
  const double a = phi(t), b = phi(1.0 - t);
  return a / (a + b);
}

double step_d1(double t) {
  if (t <= kEdge || t >= 1.0 - kEdge) return 0.0;
  const double a = phi(t), b = phi(1.0 - t);
  const double ap = a / (t * t);
  const double bp = -b / ((1.0 - t) * (1.0 - t));
  const double den = a + b;
  return (ap * b - a * bp) / (den * den);
}

double step_d2(double t) {
  if (t <= kEdge || t >= 1.0 - kEdge) return 0.0;
  const double u = 1.0 - t;
  const double a = phi(t), b = phi(u);
  const double ap = a / (t * t);
  const double bp = -b / (u * u);
  const double app = a * (1.0 / (t * t * t * t) - 2.0 / (t * t * t));
  const double bpp = b * (1.0 / (u * u * u * u) - 2.0 / (u * u * u));
  const double den = a + b;
  const double num1 = app * b - a * bpp;
  const double num0 = ap * b - a * bp;
  return (num1 * den - 2.0 * num0 * (ap + bp)) / (den * den * den);
}

double profile(double t) {
  const double s = 1.0 - t * t;
  return s > 1.0e-12 ? std::exp(-1.0 / s) : 0.0;
}

}  // namespace speclab::bump
