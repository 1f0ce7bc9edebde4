// Uniform grid descriptors and sampled fields.
#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace speclab {

using cplx = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// 1-D uniform grid: points x0 + i*dx, i = 0..n-1.  When used periodically the
// period is n*dx.
struct Grid1 {
  double x0 = 0.0;
  double dx = 1.0;
  int n = 0;

  double x(int i) const { return x0 + i * dx; }
  double length() const { return n * dx; }
  // Angular frequency of FFT bin i on the periodic extension.
  double freq(int i) const {
    const int k = (i <= n / 2) ? i : i - n;
    return kTwoPi * k / length();
  }
  double nyquist() const { return kPi / dx; }
  // Index of the grid point closest to x; throws if x is off the grid by more
  // than tol*dx.
  int index_of(double x_, double tol = 1e-9) const {
    const double u = (x_ - x0) / dx;
    const int i = static_cast<int>(std::lround(u));
    if (i < 0 || i >= n || std::abs(u - i) > tol)
      throw std::invalid_argument("grid: coordinate not on grid");
    return i;
  }
};

inline Grid1 make_grid1(double lo, double hi, int n) {
  if (n <= 0 || hi <= lo) throw std::invalid_argument("grid: bad extent");
  return Grid1{lo, (hi - lo) / n, n};
}

struct Grid2 {
  Grid1 u, v;
  std::size_t size() const {
    return static_cast<std::size_t>(u.n) * static_cast<std::size_t>(v.n);
  }
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * v.n + j;
  }
};

template <typename T>
struct Field2 {
  Grid2 grid;
  std::vector<T> data;

  Field2() = default;
  explicit Field2(const Grid2& g) : grid(g), data(g.size(), T{}) {}
  T& at(int i, int j) { return data[grid.idx(i, j)]; }
  const T& at(int i, int j) const { return data[grid.idx(i, j)]; }
};

using RField = Field2<double>;
using CField = Field2<cplx>;

}  // namespace speclab
