// Gauss-Legendre nodes/weights (Newton on the Legendre recurrence).
#pragma once

#include <cmath>
#include <vector>

namespace speclab {

struct GaussRule {
  std::vector<double> x, w;
};

// n-point rule on [-1, 1].
inline GaussRule gauss_legendre(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    r.w[n - 1 - i] = r.w[i];
  }
  return r;
}

// Rule mapped to [a, b].
inline GaussRule gauss_legendre(int n, double a, double b) {
  GaussRule r = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    r.x[i] = mid + half * r.x[i];
    r.w[i] *= half;
  }
  return r;
}

}  // namespace speclab
