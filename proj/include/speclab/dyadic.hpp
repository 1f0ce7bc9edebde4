// Dyadic angular cutoffs beta_j at scale lambda, Littlewood-Paley shells,
// the order-0 conic multiplier, and FFT multiplier application.
#pragma once

#include <string>
#include <vector>

#include "speclab/bump.hpp"
#include "speclab/grid.hpp"

namespace speclab::dyadic {

enum class Kind { angular, cap, shell, conic, aux_phi, aux_psi, sector };

// One cutoff.  Angular members act on xi' = (xi2, xi3); shells and the conic
// multiplier act on 3-D xi; sectors are the kernel-side theta-bar cutoffs.
struct Member {
  Kind kind = Kind::angular;
  double lambda = 0.0;
  int j = 0;              // signed index; |j| = N marks the cap
  int N = 0;              // cap index of the owning family (angular kinds)
  double theta = 0.0;     // 2^{-|j|} for angular members
  // sector parameters: zeta2/zeta3 within theta_bar of theta_center
  double theta_center = 0.0, theta_bar = 0.0;

  double operator()(double xi2, double xi3) const;   // angular/aux/sector kinds
  double at3(double xi1, double xi2, double xi3) const;  // shell/conic kinds

  // conservative support box in (xi2, xi3); values vanish outside
  double lo2 = 0.0, hi2 = 0.0, lo3 = 0.0, hi3 = 0.0;
  bool support_empty() const { return hi2 <= lo2 || hi3 <= lo3; }

  std::string to_json() const;
};

struct CutoffFamily {
  double lambda = 0.0;
  int N = 0;  // cap index
  std::vector<Member> members;  // j = -N..-1, 1..N (j = -N mirrors the cap)

  const Member& at(int j) const;
  // Partition sum over the defining index set {1..N} u {1-N..-1}.
  double partition_sum(double xi2, double xi3) const;
};

// N_lambda = ceil(log2(lambda)/3); requires lambda >= 8 so that at least the
// cap and one angular scale exist.
int n_lambda(double lambda);

// Angular family at scale lambda (>= 8), satisfying the support, mirror and
// partition-of-unity constraints on {|xi2| <= lambda/8, xi3 in
// [lambda/2, 2 lambda]}.
CutoffFamily build_angular_family(double lambda);

// Slightly fattened companions of beta_j with the stated support separations.
Member build_aux(const CutoffFamily& fam, int j, Kind which /* aux_phi|aux_psi */);

// Littlewood-Paley shell Gamma_k (|xi| ~ 2^k within the cone) and the order-0
// conic multiplier Gamma.
Member build_shell(int k);
Member build_conic();

// Kernel-side sector: zeta3 ~ mu, zeta2/zeta3 within theta_bar of center.
// center = 0 with theta_bar = mu^{-1/2} gives the |zeta2| <~ mu^{1/2} cap.
// The zeta3 window spans [z3lo, z3hi] * mu with quarter-width transitions.
Member build_sector(double mu, double center, double theta_bar,
                    double z3lo = 0.5, double z3hi = 2.0);

// Apply member as a Fourier multiplier on a periodic (x2, x3) field.
// Requires grid Nyquist >= 4 lambda on both axes.
CField apply_multiplier(const Member& c, const CField& f);

// || (sum_j |beta_j(D') f|^2)^{1/2} ||_2 / ||f||_2 over the family's defining
// index set; f must be nonzero.
double almost_orthogonality_check(const CutoffFamily& fam, const CField& f);

Member member_from_json(const std::string& js);

}  // namespace speclab::dyadic
