#include "speclab/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace speclab::fft {

static std::mutex planner_mutex;

void dft1(cplx* data, int n, int sign) {
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(data),
                            reinterpret_cast<fftw_complex*>(data),
                            sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex);
  fftw_destroy_plan(plan);
}

void dft2(cplx* data, int n0, int n1, int sign) {
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    plan = fftw_plan_dft_2d(n0, n1, reinterpret_cast<fftw_complex*>(data),
                            reinterpret_cast<fftw_complex*>(data),
                            sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex);
  fftw_destroy_plan(plan);
}

void forward2(CField& f) { dft2(f.data.data(), f.grid.u.n, f.grid.v.n, -1); }

void backward2(CField& f) {
  dft2(f.data.data(), f.grid.u.n, f.grid.v.n, +1);
  const double s = 1.0 / static_cast<double>(f.grid.size());
  for (auto& z : f.data) z *= s;
}

std::vector<double> cosine_coefficients(const std::vector<double>& samples, int n) {
  // Trapezoid-exact DCT-I: a_k = (2/n) * sum'' f_j cos(k pi j / n), where the
  // primed sum halves the endpoint terms (and a_0, a_n get an extra 1/2).
  std::vector<double> a(n + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    double s = 0.5 * (samples[0] + (k % 2 == 0 ? samples[n] : -samples[n]));
    for (int j = 1; j < n; ++j) s += samples[j] * std::cos(kPi * k * j / n);
    a[k] = 2.0 * s / n;
  }
  a[0] *= 0.5;
  a[n] *= 0.5;
  return a;
}

}  // namespace speclab::fft
