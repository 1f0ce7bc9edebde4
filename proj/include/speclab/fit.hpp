// Least-squares line fits for growth-exponent measurements.
#pragma once

#include <utility>
#include <vector>

namespace speclab {

// Log-log (or any) regression record.  Residuals are reported, never hidden.
struct ExponentFit {
  std::vector<std::pair<double, double>> points;  // (x, y) as fitted
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

// Ordinary least squares through (x_i, y_i).  Requires >= 3 points with
// distinct abscissae; throws std::invalid_argument otherwise.
ExponentFit fit_slope(const std::vector<std::pair<double, double>>& pts);

// Convenience: fit log(y) against log(x).
ExponentFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace speclab
