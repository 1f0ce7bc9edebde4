#include "speclab/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace speclab {

ExponentFit fit_slope(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 3)
    throw std::invalid_argument("fit_slope: need at least 3 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = n * sxx - sx * sx;
  // degenerate when all abscissae coincide
  double spread = 0;
  for (const auto& [x, y] : pts) spread = std::max(spread, std::abs(x - sx / n));
  if (spread < 1e-14 * (1.0 + std::abs(sx / n)) || det == 0.0)
    throw std::invalid_argument("fit_slope: degenerate abscissae");

  ExponentFit f;
  f.points = pts;
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / n;
  for (const auto& [x, y] : pts)
    f.max_residual = std::max(f.max_residual, std::abs(y - (f.slope * x + f.intercept)));
  return f;
}

ExponentFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("fit_loglog: size mismatch");
  std::vector<std::pair<double, double>> pts;
  pts.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0)
      throw std::invalid_argument("fit_loglog: nonpositive data");
    pts.emplace_back(std::log(x[i]), std::log(y[i]));
  }
  return fit_slope(pts);
}

}  // namespace speclab
