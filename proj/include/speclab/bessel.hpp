// Bessel functions of integer order and their zeros, at the accuracy needed
// for disk eigenmodes (|J_m(zero)| <= 1e-12 certified).
#pragma once

#include <vector>

namespace speclab::bessel {

enum class Bc { dirichlet, neumann };

// J_m(x) for integer m >= 0, x >= 0.  Ascending series for small x, backward
// (Miller) recurrence with even-sum normalization otherwise.
double J(int m, double x);

// All of J_0(x) .. J_mmax(x) in one backward pass.
std::vector<double> J_all(int mmax, double x);

// Derivative J_m'(x).
double Jp(int m, double x);

// k-th positive zero of J_m (dirichlet) or of J_m' (neumann), m >= 0, k >= 1.
// Result satisfies |J_m(z)| <= 1e-12 (resp. |J_m'(z)| <= 1e-12); throws
// std::runtime_error with the bracket state if refinement fails.
double zero(int m, int k, Bc bc);

// First `count` zeros, increasing.
std::vector<double> zeros(int m, int count, Bc bc);

// Zeros of J_m (or J_m') lying in [lo, hi], with the enumeration certified by
// bracketing against neighbours.
std::vector<std::pair<int, double>> zeros_in(int m, double lo, double hi, Bc bc);

}  // namespace speclab::bessel
