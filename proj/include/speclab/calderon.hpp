// Weighted-L2 boundedness check for the convolution kernel <r>^{-2} against
// Lipschitz weights M >= 1, |M(r) - M(s)| <= |r - s|.
#pragma once

#include <cstdint>
#include <vector>

namespace speclab::kern {

struct CalderonResult {
  double ratio = 0.0;        // max over trials of ||k*f||_M / ||f||_M
  double unweighted = 0.0;   // operator norm for M == 1 (max |multiplier|)
  int trials = 0;
};

// Periodic realization on [-len/2, len/2) with n grid points; the kernel is
// the periodization of 1/(1+r^2).
double unweighted_conv_norm(double len, int n);

// Random piecewise-linear Lipschitz weight with slopes in [-1, 1], offsets in
// [1, 100], clamped at 1.
std::vector<double> random_lipschitz_weight(double len, int n, std::uint64_t seed);

// Verifies the weight hypotheses (M >= 1, discrete Lipschitz), then measures
// max_{trials} ||k*f||_{L2(M)} / ||f||_{L2(M)} over random fields f.
CalderonResult calderon_weighted_check(const std::vector<double>& weight,
                                       double len, int trials,
                                       std::uint64_t seed);

}  // namespace speclab::kern
