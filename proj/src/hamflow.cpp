#include "speclab/hamflow.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "speclab/rng.hpp"

namespace speclab::flow {

namespace {

// Plain rescaled symbol with derivatives, all analytic:
//   q = chi(eta) r(zeta) W(theta x) + theta B(eta),  eta = zeta / theta.
// Expressed through the SymbolModel pieces A, B at eta:
//   q           = theta (A(eta) W + B(eta))
//   d_zeta_i q  = A_i(eta) W + B_i(eta)
//   d2_zeta q   = theta^{-1} (A_ij W + B_ij)
//   d_z2 q      = theta^2 A(eta) W'
//   d2_z2 q     = theta^3 A(eta) W''
//   d_z2 d_zeta = theta A_i(eta) W'
SymbolDerivs eval_plain(const RescaledSymbol& rs, double x1, const Vec2& z,
                        const Vec2& zeta) {
  const double th = rs.theta;
  const double e2 = zeta[0] / th, e3 = zeta[1] / th;
  const auto A = rs.sym.A(e2, e3);
  const auto B = rs.sym.B(e2, e3);
  const double xa = th * x1;  // metric x1 argument (row must be uniform there)
  const double x2 = th * z[0];
  const double W = rs.sym.W(rs.row, x2);
  const double W1 = rs.sym.W_d1(rs.row, x2);
  const double W2 = rs.sym.W_d2(rs.row, x2);
  (void)xa;
  SymbolDerivs d;
  d.q = th * (A.v * W + B.v);
  d.dzeta = {A.d2 * W + B.d2, A.d3 * W + B.d3};
  d.dzetazeta = {{{(A.d22 * W + B.d22) / th, (A.d23 * W + B.d23) / th},
                  {(A.d23 * W + B.d23) / th, (A.d33 * W + B.d33) / th}}};
  d.dz = {th * th * A.v * W1, 0.0};
  d.dzz = {{{th * th * th * A.v * W2, 0.0}, {0.0, 0.0}}};
  d.dzzeta = {{{th * A.d2 * W1, th * A.d3 * W1}, {0.0, 0.0}}};
  return d;
}

}  // namespace

SymbolDerivs RescaledSymbol::eval(double x1, const Vec2& z, const Vec2& zeta) const {
  if (!homogeneous) return eval_plain(*this, x1, z, zeta);
  // degree-1 homogeneous surrogate: Q(zeta) = R q(x, mu omega) / mu,
  // R = |zeta|, omega = zeta/R.  Derivatives by the projective chain rule
  // with P = I - omega omega^T.
  const double R = std::hypot(zeta[0], zeta[1]);
  if (R < 1e-12)
    throw std::invalid_argument("homogeneous symbol: zeta = 0");
  const Vec2 om{zeta[0] / R, zeta[1] / R};
  const Vec2 v{mu * om[0], mu * om[1]};
  const SymbolDerivs b = eval_plain(*this, x1, z, v);
  Mat2 P{{{1.0 - om[0] * om[0], -om[0] * om[1]},
          {-om[0] * om[1], 1.0 - om[1] * om[1]}}};
  SymbolDerivs d;
  d.q = R * b.q / mu;
  const double q0mu = b.q / mu;
  // gradient: omega_i q0/mu + (P g)_i
  Vec2 Pg{P[0][0] * b.dzeta[0] + P[0][1] * b.dzeta[1],
          P[1][0] * b.dzeta[0] + P[1][1] * b.dzeta[1]};
  d.dzeta = {om[0] * q0mu + Pg[0], om[1] * q0mu + Pg[1]};
  // Hessian: P_ij (q0/mu - omega.g)/R + (mu/R) (P H P)_ij
  const double og = om[0] * b.dzeta[0] + om[1] * b.dzeta[1];
  Mat2 PHP{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double s = 0.0;
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          s += P[i][k] * b.dzetazeta[k][l] * P[j][l];
      PHP[i][j] = s;
    }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      d.dzetazeta[i][j] = P[i][j] * (q0mu - og) / R + mu / R * PHP[i][j];
  // x derivatives pass through the radial factor
  d.dz = {R * b.dz[0] / mu, 0.0};
  d.dzz = {{{R * b.dzz[0][0] / mu, 0.0}, {0.0, 0.0}}};
  // mixed: d_z2 [omega_i q0/mu + (P g)_i] = omega_i d_z2 q0 / mu + (P d_z2 g)_i
  Vec2 dzg{b.dzzeta[0][0], b.dzzeta[0][1]};
  Vec2 Pdzg{P[0][0] * dzg[0] + P[0][1] * dzg[1],
            P[1][0] * dzg[0] + P[1][1] * dzg[1]};
  d.dzzeta = {{{om[0] * b.dz[0] / mu + Pdzg[0], om[1] * b.dz[0] / mu + Pdzg[1]},
               {0.0, 0.0}}};
  return d;
}

RescaledSymbol make_rescaled_symbol(const geom::MetricModel& extended,
                                    double lambda, double theta,
                                    bool homogeneous, double trunc_c) {
  if (theta <= 0.0 || theta > 1.0)
    throw std::invalid_argument("make_rescaled_symbol: theta in (0, 1]");
  RescaledSymbol rs;
  rs.theta = theta;
  rs.lambda = lambda;
  rs.mu = theta * lambda;
  rs.homogeneous = homogeneous;
  auto s = geom::build_symbol(extended, lambda);
  const double cutoff = trunc_c * std::sqrt(lambda / theta);
  rs.sym = geom::truncate_symbol(s, cutoff);
  if (!rs.sym.row_uniform_center())
    throw std::invalid_argument(
        "make_rescaled_symbol: metric must be x1-uniform near the patch center");
  rs.row = rs.sym.row_of(0.0);
  return rs;
}

namespace {

// ODE state: (z, zeta) [+ 16 Jacobian entries] [+ 4 running d2_zeta q integrals]
constexpr int kBase = 4, kJac = 16, kInt = 4;

struct Rhs {
  const RescaledSymbol* q;
  bool with_jac;

  int dim() const { return with_jac ? kBase + kJac + kInt : kBase; }

  void operator()(double x1, const double* y, double* dy) const {
    const Vec2 z{y[0], y[1]}, zeta{y[2], y[3]};
    const SymbolDerivs d = q->eval(x1, z, zeta);
    dy[0] = -d.dzeta[0];
    dy[1] = -d.dzeta[1];
    dy[2] = d.dz[0];
    dy[3] = d.dz[1];
    if (!with_jac) return;
    // dJ/dt = DF J, DF = [[-q_{zeta z}, -q_{zeta zeta}], [q_{zz}, q_{z zeta}]]
    double DF[4][4];
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        DF[i][j] = -d.dzzeta[j][i];          // -d(d_zeta_i q)/dz_j
        DF[i][2 + j] = -d.dzetazeta[i][j];   // -d(d_zeta_i q)/dzeta_j
        DF[2 + i][j] = d.dzz[i][j];          // +d(d_z_i q)/dz_j
        DF[2 + i][2 + j] = d.dzzeta[i][j];   // +d(d_z_i q)/dzeta_j
      }
    }
    const double* J = y + kBase;
    double* dJ = dy + kBase;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = 0.0;
        for (int k = 0; k < 4; ++k) s += DF[i][k] * J[4 * k + j];
        dJ[4 * i + j] = s;
      }
    // running integral of d^2_zeta q along the flow
    dy[kBase + kJac + 0] = d.dzetazeta[0][0];
    dy[kBase + kJac + 1] = d.dzetazeta[0][1];
    dy[kBase + kJac + 2] = d.dzetazeta[1][0];
    dy[kBase + kJac + 3] = d.dzetazeta[1][1];
  }
};

void rk4_step(const Rhs& f, double t, const double* y, double h, double* out,
              int n) {
  double k1[24], k2[24], k3[24], k4[24], tmp[24];
  f(t, y, k1);
  for (int i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  f(t + 0.5 * h, tmp, k2);
  for (int i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  f(t + 0.5 * h, tmp, k3);
  for (int i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
  f(t + h, tmp, k4);
  for (int i = 0; i < n; ++i)
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

// Adaptive RK4 with step doubling; returns (steps, max local error estimate).
std::pair<int, double> integrate(const Rhs& f, double r, double s, double* y,
                                 double tol) {
  const int n = f.dim();
  const double dir = s >= r ? 1.0 : -1.0;
  double t = r;
  double h = dir * std::min(0.05, std::abs(s - r));
  int steps = 0;
  double errmax = 0.0;
  while (dir * (s - t) > 1e-14) {
    if (std::abs(h) > std::abs(s - t)) h = s - t;
    double y1[24], yh[24], y2[24];
    rk4_step(f, t, y, h, y1, n);
    rk4_step(f, t, y, 0.5 * h, yh, n);
    rk4_step(f, t + 0.5 * h, yh, 0.5 * h, y2, n);
    double err = 0.0;
    for (int i = 0; i < kBase; ++i) err = std::max(err, std::abs(y1[i] - y2[i]));
    err /= 15.0;
    if (err <= tol || std::abs(h) <= 1e-9) {
      if (std::abs(h) <= 1e-9 && err > 100.0 * tol) {
        std::ostringstream os;
        os << "flow: step-size underflow near x1=" << t << ", z2=" << y[0]
           << " (kink region)";
        throw std::runtime_error(os.str());
      }
      // accept the finer solution with one Richardson correction
      for (int i = 0; i < n; ++i) y[i] = y2[i] + (y2[i] - y1[i]) / 15.0;
      t += h;
      ++steps;
      errmax = std::max(errmax, err);
      if (err < 0.1 * tol) h *= 1.6;
    } else {
      h *= 0.5;
    }
    if (steps > 2000000) throw std::runtime_error("flow: too many steps");
  }
  return {steps, errmax};
}

FlowMap run(const RescaledSymbol& q, const std::vector<PhasePoint>& seeds,
            double r, double s, double tol, bool with_jac) {
  if (std::abs(s - r) > 1.0 + 1e-12)
    throw std::invalid_argument("flow: |s - r| <= 1 required");
  if (std::abs(r) > 1.0 || std::abs(s) > 1.0)
    throw std::invalid_argument("flow: r, s in [-1, 1]");
  FlowMap map;
  map.r = r;
  map.s = s;
  map.has_jacobian = with_jac;
  map.points.resize(seeds.size());
  Rhs f{&q, with_jac};
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    double y[24] = {0};
    y[0] = seeds[i].z[0];
    y[1] = seeds[i].z[1];
    y[2] = seeds[i].zeta[0];
    y[3] = seeds[i].zeta[1];
    if (with_jac)
      for (int d = 0; d < 4; ++d) y[kBase + 4 * d + d] = 1.0;
    auto [steps, err] = integrate(f, r, s, y, tol);
    FlowPoint& p = map.points[i];
    p.start = seeds[i];
    p.end = PhasePoint{{y[0], y[1]}, {y[2], y[3]}};
    p.steps = steps;
    p.err_estimate = err;
    if (with_jac) {
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) p.jacobian[a][b] = y[kBase + 4 * a + b];
      p.int_dzetazeta = {{{y[kBase + kJac + 0], y[kBase + kJac + 1]},
                          {y[kBase + kJac + 2], y[kBase + kJac + 3]}}};
    }
  }
  return map;
}

}  // namespace

FlowMap flow(const RescaledSymbol& q, const std::vector<PhasePoint>& seeds,
             double r, double s, double tol) {
  return run(q, seeds, r, s, tol, false);
}

FlowMap variational_flow(const RescaledSymbol& q,
                         const std::vector<PhasePoint>& seeds, double r,
                         double s, double tol) {
  return run(q, seeds, r, s, tol, true);
}

double symplectic_defect(const Mat4& J) {
  // Omega for ordering (z2, z3, zeta2, zeta3): [[0, I], [-I, 0]]
  double O[4][4] = {{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 0, 0}, {0, -1, 0, 0}};
  double JT_O_J[4][4] = {{0}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) s += J[k][i] * O[k][l] * J[l][j];
      JT_O_J[i][j] = s;
    }
  double d = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) d = std::max(d, std::abs(JT_O_J[i][j] - O[i][j]));
  return d;
}

double det4(const Mat4& M) {
  double a[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a[i][j] = M[i][j];
  double det = 1.0;
  for (int c = 0; c < 4; ++c) {
    int p = c;
    for (int rr = c + 1; rr < 4; ++rr)
      if (std::abs(a[rr][c]) > std::abs(a[p][c])) p = rr;
    if (p != c) {
      for (int j = 0; j < 4; ++j) std::swap(a[p][j], a[c][j]);
      det = -det;
    }
    if (a[c][c] == 0.0) return 0.0;
    det *= a[c][c];
    for (int rr = c + 1; rr < 4; ++rr) {
      const double f = a[rr][c] / a[c][c];
      for (int j = c; j < 4; ++j) a[rr][j] -= f * a[c][j];
    }
  }
  return det;
}

namespace {

double norm2x2(const Mat2& m) {
  double s = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s = std::max(s, std::abs(m[i][j]));
  return s;
}

Mat2 block(const Mat4& J, int bi, int bj) {
  Mat2 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out[i][j] = J[2 * bi + i][2 * bj + j];
  return out;
}

Mat2 minus_id(Mat2 m) {
  m[0][0] -= 1.0;
  m[1][1] -= 1.0;
  return m;
}

}  // namespace

DerivativeReport flow_derivative_report(const RescaledSymbol& q,
                                        const std::vector<PhasePoint>& seeds,
                                        double r, double s, double tol) {
  const double dt = std::abs(s - r);
  const double brk = std::hypot(1.0, std::sqrt(q.mu) * dt);  // <mu^{1/2} dt>
  DerivativeReport rep;
  rep.mu = q.mu;
  rep.theta = q.theta;
  rep.dt = dt;

  // FD steps sized against both the integrator tolerance (noise ~ tol/d^2)
  // and the symbol's feature scales (truncation length ~ mu^{-1/2} in z,
  // sector width ~ theta in zeta)
  // FD steps: small against the plateau margin in zeta (the chi blend sits
  // at ratio 1/9 with width ~0.014) and the truncation length in z
  const double dz = std::max(2e-3, 0.05 / std::sqrt(q.mu));
  const double dzt = std::max(1e-3, q.theta / 64.0);
  if (dzt * dzt < 100.0 * tol)
    throw std::invalid_argument(
        "flow_derivative_report: finite-difference step collides with the "
        "integrator tolerance");

  // perturbed seed sets for central differences of the variational flow
  auto shift = [&](const PhasePoint& p, int comp, double d) {
    PhasePoint o = p;
    if (comp < 2)
      o.z[comp] += d;
    else
      o.zeta[comp - 2] += d;
    return o;
  };

  std::vector<PhasePoint> all;
  for (const auto& p : seeds) {
    all.push_back(p);
    for (int c = 0; c < 4; ++c) {
      const double d = c < 2 ? dz : dzt;
      all.push_back(shift(p, c, +d));
      all.push_back(shift(p, c, -d));
    }
  }
  auto fm = variational_flow(q, all, r, s, tol);
  const int stride = 9;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto& base = fm.points[i * stride];
    const Mat4& J = base.jacobian;
    rep.r_dz_z = std::max(rep.r_dz_z, norm2x2(minus_id(block(J, 0, 0))) / dt);
    rep.r_dzeta_z = std::max(rep.r_dzeta_z, norm2x2(block(J, 0, 1)) / dt);
    rep.r_dzeta_zeta =
        std::max(rep.r_dzeta_zeta, norm2x2(minus_id(block(J, 1, 1))) / dt);
    rep.r_dz_zeta = std::max(rep.r_dz_zeta, norm2x2(block(J, 1, 0)));

    // second derivatives: central differences of Jacobian blocks
    for (int c = 0; c < 4; ++c) {
      const double d = c < 2 ? dz : dzt;
      const Mat4& Jp = fm.points[i * stride + 1 + 2 * c].jacobian;
      const Mat4& Jm = fm.points[i * stride + 2 + 2 * c].jacobian;
      Mat4 D;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) D[a][b] = (Jp[a][b] - Jm[a][b]) / (2.0 * d);
      if (c < 2) {
        // d/dz of blocks
        rep.r_dzz_z = std::max(rep.r_dzz_z, norm2x2(block(D, 0, 0)) / brk);
        rep.r_dzz_zeta =
            std::max(rep.r_dzz_zeta, norm2x2(block(D, 1, 0)) / std::sqrt(q.mu));
        rep.r_dzzeta_z =
            std::max(rep.r_dzzeta_z, norm2x2(block(D, 0, 1)) / (dt * brk));
        rep.r_dzzeta_zeta =
            std::max(rep.r_dzzeta_zeta, norm2x2(block(D, 1, 1)) / brk);
      } else {
        // d/dzeta of blocks: k = 2 pure-zeta derivatives
        const double sh = dt * brk;
        rep.r_k2 = std::max(
            rep.r_k2, (norm2x2(block(D, 0, 1)) + norm2x2(block(D, 1, 1))) / sh);
        // k = 3 via second difference of the (zeta, zeta) blocks
        const Mat4& J0 = J;
        Mat4 D2;
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b)
            D2[a][b] = (Jp[a][b] - 2.0 * J0[a][b] + Jm[a][b]) / (d * d);
        const double sh3 = dt * brk * brk;
        rep.r_k3 = std::max(
            rep.r_k3,
            (norm2x2(block(D2, 0, 1)) + norm2x2(block(D2, 1, 1))) / sh3);
      }
    }
  }
  return rep;
}

double corollary_discrepancy(const RescaledSymbol& q,
                             const std::vector<PhasePoint>& seeds, double r,
                             double s, double tol) {
  auto fm = variational_flow(q, seeds, r, s, tol);
  const double dt2 = (s - r) * (s - r);
  double worst = 0.0;
  for (const auto& p : fm.points) {
    const Mat2 dzeta_z = block(p.jacobian, 0, 1);
    double d = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        d = std::max(d, std::abs(dzeta_z[i][j] + p.int_dzetazeta[i][j]));
    worst = std::max(worst, d / dt2);
  }
  return worst;
}

std::string flowmap_csv(const FlowMap& fm) {
  std::string out = "r,s,z2,z3,zeta2,zeta3,z2_f,z3_f,zeta2_f,zeta3_f,steps,err";
  if (fm.has_jacobian) out += ",J00,J01,J02,J03,J10,J11,J12,J13,J20,J21,J22,J23,J30,J31,J32,J33";
  out += "\n";
  char buf[64];
  auto add = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
  };
  for (const auto& p : fm.points) {
    add(fm.r); out += ","; add(fm.s); out += ",";
    add(p.start.z[0]); out += ","; add(p.start.z[1]); out += ",";
    add(p.start.zeta[0]); out += ","; add(p.start.zeta[1]); out += ",";
    add(p.end.z[0]); out += ","; add(p.end.z[1]); out += ",";
    add(p.end.zeta[0]); out += ","; add(p.end.zeta[1]); out += ",";
    std::snprintf(buf, sizeof(buf), "%d", p.steps);
    out += buf; out += ",";
    add(p.err_estimate);
    if (fm.has_jacobian)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          out += ",";
          add(p.jacobian[a][b]);
        }
    out += "\n";
  }
  return out;
}

void save_flowmap(const FlowMap& fm, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_flowmap: cannot open " + path);
  os << flowmap_csv(fm);
}

std::vector<PhasePoint> cone_seeds(double theta, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PhasePoint> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    PhasePoint p;
    p.z = {rng.uniform(-0.25, 0.25), rng.uniform(-0.5, 0.5)};
    const double zeta3 = rng.uniform(0.9, 1.1);
    // stay clear of the chi blend band at ratio 1/9 when theta is small
    const double hi = std::min(1.7 * theta, 0.104);
    const double lo = std::min(0.6 * theta, 0.8 * hi);
    p.zeta = {zeta3 * rng.uniform(lo, hi), zeta3};
    out.push_back(p);
  }
  return out;
}

}  // namespace speclab::flow
