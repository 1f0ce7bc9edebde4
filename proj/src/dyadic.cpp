#include "speclab/dyadic.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "speclab/fft.hpp"

namespace speclab::dyadic {

namespace {

// one-sided dyadic step: 1 for xi2 <= lambda 2^{-j-1}, 0 beyond lambda 2^{-j}
double psi_level(double xi2, double lambda, int j) {
  const double t = std::ldexp(xi2 / lambda, j);  // 2^j xi2 / lambda
  return bump::step_down(t, 0.5, 1.0);
}

// positive-side cap step: 1 for xi2 <= (5/8) lambda^{2/3}, 0 beyond (7/8)
double cap_step(double xi2, double lambda) {
  const double s = std::cbrt(lambda * lambda);
  return bump::step_down(xi2, 0.625 * s, 0.875 * s);
}

double xi3_window(double xi3, double lambda) {
  return bump::Plateau{lambda / 4.0, lambda / 2.0, 2.0 * lambda, 4.0 * lambda}(xi3);
}

double angular_xi2_profile(const Member& m, double xi2) {
  const int N = m.N;
  const int aj = std::abs(m.j);
  const double s = m.j > 0 ? xi2 : -xi2;  // mirror for negative j
  if (m.kind == Kind::cap)
    return cap_step(xi2, m.lambda) + cap_step(-xi2, m.lambda) - 1.0;
  if (aj == N - 1)
    return psi_level(s, m.lambda, N - 2) - cap_step(s, m.lambda);
  return psi_level(s, m.lambda, aj - 1) - psi_level(s, m.lambda, aj);
}

}  // namespace

int n_lambda(double lambda) {
  if (lambda < 8.0)
    throw std::invalid_argument(
        "angular family: lambda too small for three dyadic scales (need >= 8)");
  return static_cast<int>(std::ceil(std::log2(lambda) / 3.0 - 1e-12));
}

double Member::operator()(double xi2, double xi3) const {
  switch (kind) {
    case Kind::angular:
    case Kind::cap:
      return angular_xi2_profile(*this, xi2) * xi3_window(xi3, lambda);
    case Kind::aux_phi:
    case Kind::aux_psi: {
      // plateau covering [lo2, hi2] with the recorded margin encoded in
      // theta_bar (transition width)
      const double w = theta_bar;
      return bump::Plateau{lo2, lo2 + w, hi2 - w, hi2}(xi2) *
             bump::Plateau{lambda / 8.0, lambda / 4.0, 4.0 * lambda, 8.0 * lambda}(xi3);
    }
    case Kind::sector: {
      if (xi3 <= 0.0) return 0.0;
      const double ratio = xi2 / xi3;
      const double u = (ratio - theta_center) / theta_bar;
      const double mid = 0.25 * (hi3 - lo3);
      return bump::Plateau{-1.0, -0.625, 0.625, 1.0}(u) *
             bump::Plateau{lo3, lo3 + mid, hi3 - mid, hi3}(xi3);
    }
    default:
      throw std::logic_error("Member: 2-argument evaluation on a 3-D cutoff");
  }
}

double Member::at3(double xi1, double xi2, double xi3) const {
  const double r12 = std::hypot(xi1, xi2);
  const double a3 = std::abs(xi3);
  if (kind == Kind::conic) {
    if (a3 == 0.0) return 0.0;
    return bump::Plateau{0.25, 0.5, 2.0, 4.0}(r12 / a3);
  }
  if (kind == Kind::shell) {
    const double r = std::sqrt(r12 * r12 + xi3 * xi3);
    const double sc = std::ldexp(1.0, -j);  // 2^{-k}
    const double down1 = bump::step_down(r * sc, 1.0, 2.0);
    const double down0 = bump::step_down(r * sc * 2.0, 1.0, 2.0);
    const double shell = down1 - down0;
    if (a3 == 0.0) return 0.0;
    return shell * bump::Plateau{0.25, 0.5, 2.0, 4.0}(r12 / a3);
  }
  throw std::logic_error("Member: 3-argument evaluation on a 2-D cutoff");
}

const Member& CutoffFamily::at(int jq) const {
  for (const auto& m : members)
    if (m.j == jq) return m;
  throw std::invalid_argument("CutoffFamily: no member with index " + std::to_string(jq));
}

double CutoffFamily::partition_sum(double xi2, double xi3) const {
  double s = 0.0;
  for (const auto& m : members)
    if (m.j != -N) s += m(xi2, xi3);
  return s;
}

CutoffFamily build_angular_family(double lambda) {
  CutoffFamily fam;
  fam.lambda = lambda;
  fam.N = n_lambda(lambda);
  const double s23 = std::cbrt(lambda * lambda);
  for (int j = 1; j <= fam.N; ++j) {
    for (int sign : {+1, -1}) {
      Member m;
      m.lambda = lambda;
      m.j = sign * j;
      m.N = fam.N;
      m.theta = std::ldexp(1.0, -j);
      m.kind = j == fam.N ? Kind::cap : Kind::angular;
      if (j == fam.N) {
        m.lo2 = -0.875 * s23;
        m.hi2 = 0.875 * s23;
      } else {
        const double lo = j == fam.N - 1 ? 0.625 * s23 : std::ldexp(lambda, -j - 1);
        const double hi = std::ldexp(lambda, -j + 1);
        m.lo2 = sign > 0 ? lo : -hi;
        m.hi2 = sign > 0 ? hi : -lo;
      }
      m.lo3 = lambda / 4.0;
      m.hi3 = 4.0 * lambda;
      fam.members.push_back(m);
    }
  }
  return fam;
}

Member build_aux(const CutoffFamily& fam, int j, Kind which) {
  if (which != Kind::aux_phi && which != Kind::aux_psi)
    throw std::invalid_argument("build_aux: which must be aux_phi or aux_psi");
  const Member& b = fam.at(j);
  Member m = b;
  m.kind = which;
  // phi_j: supp(1 - phi_j) at least 2^{-j-10} lambda from supp(beta_j);
  // psi_j: one more margin layer outside phi_j.
  const double margin = std::ldexp(fam.lambda, -std::abs(j) - 10);
  const int layers = which == Kind::aux_phi ? 2 : 4;
  m.lo2 = b.lo2 - layers * margin;
  m.hi2 = b.hi2 + layers * margin;
  m.theta_bar = margin;  // transition width
  m.lo3 = fam.lambda / 8.0;
  m.hi3 = 8.0 * fam.lambda;
  return m;
}

Member build_shell(int k) {
  Member m;
  m.kind = Kind::shell;
  m.j = k;
  m.lambda = std::ldexp(1.0, k);
  const double r = m.lambda;
  m.lo2 = -2.0 * r;
  m.hi2 = 2.0 * r;
  m.lo3 = -2.0 * r;
  m.hi3 = 2.0 * r;
  return m;
}

Member build_conic() {
  Member m;
  m.kind = Kind::conic;
  return m;
}

Member build_sector(double mu, double center, double theta_bar,
                    double z3lo, double z3hi) {
  Member m;
  m.kind = Kind::sector;
  m.lambda = mu;
  m.theta_center = center;
  m.theta_bar = theta_bar;
  m.theta = std::max(std::abs(center), theta_bar);
  m.lo3 = z3lo * mu;
  m.hi3 = z3hi * mu;
  m.lo2 = (center - theta_bar) * m.hi3 < (center - theta_bar) * m.lo3
              ? (center - theta_bar) * m.hi3
              : (center - theta_bar) * m.lo3;
  m.hi2 = std::max((center + theta_bar) * m.hi3, (center + theta_bar) * m.lo3);
  return m;
}

CField apply_multiplier(const Member& c, const CField& f) {
  const double need = 4.0 * c.lambda;
  if (c.lambda > 0.0 &&
      (f.grid.u.nyquist() < need || f.grid.v.nyquist() < need))
    throw std::invalid_argument("apply_multiplier: grid Nyquist below 4 lambda");
  CField out = f;
  fft::forward2(out);
  for (int i = 0; i < out.grid.u.n; ++i) {
    const double xi2 = out.grid.u.freq(i);
    for (int jj = 0; jj < out.grid.v.n; ++jj) {
      const double xi3 = out.grid.v.freq(jj);
      out.at(i, jj) *= c(xi2, xi3);
    }
  }
  fft::backward2(out);
  return out;
}

double almost_orthogonality_check(const CutoffFamily& fam, const CField& f) {
  double nf = 0.0;
  for (const auto& z : f.data) nf += std::norm(z);
  if (nf == 0.0)
    throw std::invalid_argument("almost_orthogonality_check: zero field");
  CField hat = f;
  fft::forward2(hat);
  double sq = 0.0;
  for (int i = 0; i < hat.grid.u.n; ++i) {
    const double xi2 = hat.grid.u.freq(i);
    for (int jj = 0; jj < hat.grid.v.n; ++jj) {
      const double xi3 = hat.grid.v.freq(jj);
      double s = 0.0;
      for (const auto& m : fam.members)
        if (m.j != -fam.N) {
          const double v = m(xi2, xi3);
          s += v * v;
        }
      sq += s * std::norm(hat.at(i, jj));
    }
  }
  // Parseval: ||beta_j(D') f||_2^2 = (1/n^2) sum |beta_j hat(f)|^2
  return std::sqrt(sq / static_cast<double>(hat.grid.size()) / nf);
}

std::string Member::to_json() const {
  nlohmann::json j2;
  j2["kind"] = static_cast<int>(kind);
  j2["lambda"] = lambda;
  j2["j"] = j;
  j2["N"] = N;
  j2["theta"] = theta;
  j2["theta_center"] = theta_center;
  j2["theta_bar"] = theta_bar;
  j2["support"] = {lo2, hi2, lo3, hi3};
  return j2.dump();
}

Member member_from_json(const std::string& js) {
  auto j2 = nlohmann::json::parse(js);
  Member m;
  m.kind = static_cast<Kind>(j2["kind"].get<int>());
  m.lambda = j2["lambda"];
  m.j = j2["j"];
  m.N = j2["N"];
  m.theta = j2["theta"];
  m.theta_center = j2["theta_center"];
  m.theta_bar = j2["theta_bar"];
  auto s = j2["support"];
  m.lo2 = s[0];
  m.hi2 = s[1];
  m.lo3 = s[2];
  m.hi3 = s[3];
  return m;
}

}  // namespace speclab::dyadic
