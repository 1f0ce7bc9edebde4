// Thin FFTW wrappers.  Plan creation is serialized (FFTW's planner is not
// thread safe); execution of distinct transforms may run concurrently.
#pragma once

#include <vector>

#include "speclab/grid.hpp"

namespace speclab::fft {

// In-place complex DFT along a contiguous array of length n.  sign = -1
// forward (e^{-i x xi} convention), +1 backward.  Backward is unnormalized;
// callers divide by n.
void dft1(cplx* data, int n, int sign);

// 2-D complex DFT, row-major n0 x n1, in place.
void dft2(cplx* data, int n0, int n1, int sign);

// Forward/backward with normalization: backward(forward(x)) == x.
void forward2(CField& f);
void backward2(CField& f);

// Real even-extension cosine coefficients: given samples f[0..n] of an even
// function on [0, X] at spacing X/n (endpoints included), return a[0..n] with
// f(x) = sum_k a_k cos(k pi x / X).  Plain O(n^2) evaluation; n stays small.
std::vector<double> cosine_coefficients(const std::vector<double>& samples, int n);

}  // namespace speclab::fft
