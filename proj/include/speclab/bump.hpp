// Smooth cutoff calculus: e^{-1/t}-based steps, plateaus and radial bumps,
// with first and second derivatives in closed form.
#pragma once

#include <cmath>

namespace speclab::bump {

// phi(t) = e^{-1/t} for t>0, 0 otherwise.  C-infinity on the real line.
double phi(double t);

// Smooth step: 0 for t<=0, 1 for t>=1, strictly increasing in between.
// sigma(t) = phi(t) / (phi(t) + phi(1-t)).
double step(double t);
double step_d1(double t);
double step_d2(double t);

// Step mapped to [a,b]: 0 left of a, 1 right of b.
inline double step_up(double t, double a, double b) {
  return step((t - a) / (b - a));
}
inline double step_up_d1(double t, double a, double b) {
  const double s = 1.0 / (b - a);
  return step_d1((t - a) * s) * s;
}
inline double step_up_d2(double t, double a, double b) {
  const double s = 1.0 / (b - a);
  return step_d2((t - a) * s) * s * s;
}
inline double step_down(double t, double a, double b) { return 1.0 - step_up(t, a, b); }
inline double step_down_d1(double t, double a, double b) { return -step_up_d1(t, a, b); }
inline double step_down_d2(double t, double a, double b) { return -step_up_d2(t, a, b); }

// Plateau window: 1 on [b,c], 0 outside (a,d), monotone on the flanks.
struct Plateau {
  double a, b, c, d;
  double operator()(double t) const {
    return step_up(t, a, b) * step_down(t, c, d);
  }
  double d1(double t) const {
    return step_up_d1(t, a, b) * step_down(t, c, d) +
           step_up(t, a, b) * step_down_d1(t, c, d);
  }
  double d2(double t) const {
    return step_up_d2(t, a, b) * step_down(t, c, d) +
           2.0 * step_up_d1(t, a, b) * step_down_d1(t, c, d) +
           step_up(t, a, b) * step_down_d2(t, c, d);
  }
};

// Standard bump profile exp(-1/(1-t^2)) on |t|<1, 0 outside (unnormalized).
double profile(double t);

}  // namespace speclab::bump
