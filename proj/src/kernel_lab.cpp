#include "speclab/kernel_lab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "speclab/quad.hpp"

namespace speclab::kern {

namespace {

// Window section transform S(a, w) = int g(a, t) e^{-iwt} dt
//                                  = (2pi)^{-1} int ghat(sqrt(k^2+w^2)) e^{ika} dk.
// Real, even in both arguments; tabulated on (a, w) with w tied to the
// quadrature grid.
struct SectionTable {
  double da = 0.05;
  double amax = 0.0;
  int nw = 0;
  double dw = 0.0;
  std::vector<double> val;  // [ia * nw + iw]

  SectionTable(const wp::Window& win, double amax_, int nw_, double dw_) {
    amax = amax_;
    nw = nw_;
    dw = dw_;
    const int na = static_cast<int>(amax / da) + 3;
    val.assign(static_cast<std::size_t>(na) * nw, 0.0);
    const int nq = 240;
    for (int iw = 0; iw < nw; ++iw) {
      const double w = iw * dw;
      if (w >= win.c) continue;
      const double half = std::sqrt(win.c * win.c - w * w);
      auto gr = gauss_legendre(nq, 0.0, half);
      for (int ia = 0; ia < na; ++ia) {
        const double a = ia * da;
        double s = 0.0;
        for (int i = 0; i < nq; ++i)
          s += win.ghat_radial(std::hypot(gr.x[i], w)) * std::cos(gr.x[i] * a) *
               gr.w[i];
        val[static_cast<std::size_t>(ia) * nw + iw] = 2.0 * s / kTwoPi;
      }
    }
  }

  // cubic in a, exact grid in w (iw index)
  double at(double a, int iw) const {
    a = std::abs(a);
    if (a >= amax) return 0.0;
    const double u = a / da;
    const int j = static_cast<int>(u);
    const double t = u - j;
    auto v = [&](int jj) {
      jj = std::max(0, jj);
      return val[static_cast<std::size_t>(jj) * nw + iw];
    };
    const double p0 = v(j - 1), p1 = v(j), p2 = v(j + 1), p3 = v(j + 2);
    const double A = 0.5 * (-p0 + 3 * p1 - 3 * p2 + p3);
    const double B = p0 - 2.5 * p1 + 2 * p2 - 0.5 * p3;
    const double C = 0.5 * (p2 - p0);
    return ((A * t + B) * t + C) * t + p1;
  }
};

// Flow data per zeta node (and z2 when the metric couples): either the
// closed-form straight flow of an x-independent symbol branch, or cubic
// interpolation of a tabulated integration.
struct FlowTable {
  bool analytic = true;
  double dt = 0.0;  // s - r
  flow::RescaledSymbol sym;

  // table over (z2, zeta2, zeta3): z2f, delta3, zeta2f
  double z2lo = 0.0, dz2 = 0.0;
  double t2lo = 0.0, dt2 = 0.0;  // zeta2
  double t3lo = 0.0, dt3 = 0.0;  // zeta3
  int n2 = 0, nt2 = 0, nt3 = 0;
  std::vector<double> tz2f, tdelta3, tzeta2f;

  struct Point {
    double z2f, delta3, zeta2f;
  };

  Point eval(double z2, double zeta2, double zeta3) const {
    if (analytic) {
      const auto d =
          sym.eval(0.0, flow::Vec2{0.0, 0.0}, flow::Vec2{zeta2, zeta3});
      return {z2 - dt * d.dzeta[0], -dt * d.dzeta[1], zeta2};
    }
    auto clampi = [](int i, int n) { return std::max(1, std::min(n - 3, i)); };
    auto cubic = [](double t, double p0, double p1, double p2, double p3) {
      const double A = 0.5 * (-p0 + 3 * p1 - 3 * p2 + p3);
      const double B = p0 - 2.5 * p1 + 2 * p2 - 0.5 * p3;
      const double C = 0.5 * (p2 - p0);
      return ((A * t + B) * t + C) * t + p1;
    };
    const double u2 = (z2 - z2lo) / dz2, ut2 = (zeta2 - t2lo) / dt2,
                 ut3 = (zeta3 - t3lo) / dt3;
    const int i2 = clampi(static_cast<int>(u2), n2);
    const int j2 = clampi(static_cast<int>(ut2), nt2);
    const int j3 = clampi(static_cast<int>(ut3), nt3);
    const double f2 = u2 - i2, g2 = ut2 - j2, g3 = ut3 - j3;
    Point out{0, 0, 0};
    double acc[3] = {0, 0, 0};
    const std::vector<double>* arr[3] = {&tz2f, &tdelta3, &tzeta2f};
    for (int q = 0; q < 3; ++q) {
      double c3[4];
      for (int a3 = -1; a3 <= 2; ++a3) {
        double c2[4];
        for (int a2 = -1; a2 <= 2; ++a2) {
          double cz[4];
          for (int az = -1; az <= 2; ++az) {
            const std::size_t idx =
                (static_cast<std::size_t>(i2 + az) * nt2 + (j2 + a2)) * nt3 +
                (j3 + a3);
            cz[az + 1] = (*arr[q])[idx];
          }
          c2[a2 + 1] = cubic(f2, cz[0], cz[1], cz[2], cz[3]);
        }
        c3[a3 + 1] = cubic(g2, c2[0], c2[1], c2[2], c2[3]);
      }
      acc[q] = cubic(g3, c3[0], c3[1], c3[2], c3[3]);
    }
    out.z2f = acc[0];
    out.delta3 = acc[1];
    out.zeta2f = acc[2];
    return out;
  }
};

}  // namespace

double theta_bar(double mu, double theta, double dt) {
  double tb = theta;
  if (dt > 0.0) tb = std::min(tb, 1.0 / std::sqrt(mu * dt));
  return std::max(tb, 1.0 / std::sqrt(mu));
}

struct KernelAssembly::Impl {
  KernelConfig cfg;
  flow::RescaledSymbol sym;
  std::unique_ptr<SectionTable> sect;
  FlowTable ft;
  bool empty = false;

  // quadrature grids
  GaussRule gz2c;          // z2 offsets around x2 (centered at 0)
  GaussRule gt;            // ratio t = zeta2/zeta3
  std::vector<double> z3s;  // zeta3 uniform
  double dzeta3 = 0.0;
  int nw = 0;
  double dw = 0.0;
  double U1 = 48.0;  // z-window half width in sqrt(mu) units

  explicit Impl(const KernelConfig& c) : cfg(c) {
    if (!cfg.metric) throw std::invalid_argument("kernel: metric required");
    if (cfg.mu < 16.0 || cfg.mu > 1024.0)
      throw std::invalid_argument("kernel: mu in [16, 1024]");
    if (cfg.beta.support_empty()) {
      empty = true;
      return;
    }
    const double lambda = cfg.mu / cfg.theta;
    sym = flow::make_rescaled_symbol(*cfg.metric, lambda, cfg.theta, false,
                                     cfg.trunc_c);
    // quadrature sizes (refine doubles the densities)
    const double rf = cfg.refine ? 1.5 : 1.0;
    const double rootmu = std::sqrt(cfg.mu);
    U1 = cfg.refine ? 64.0 : 48.0;

    // omega grid tied to zeta3 grid: dzeta3 = m sqrt(mu) dw
    nw = static_cast<int>(std::lround(28 * rf)) | 1;
    dw = 2.0 * cfg.window.c / (nw - 1);
    // zeta3 spacing must resolve e^{i zeta3 phase} with rate up to
    // |t| |x2 - z2| + |x3 + delta3 - y3|, not just the |s-r| drift
    const double tmax = std::abs(cfg.beta.theta_center) + cfg.beta.theta_bar;
    const double rate = tmax * (U1 / rootmu) + std::abs(cfg.s - cfg.r) + 3.0;
    double want_dz3 = 0.7 / rate / rf;
    want_dz3 = std::min(want_dz3, (cfg.beta.hi3 - cfg.beta.lo3) / 40.0);
    int mratio = std::max(1, static_cast<int>(want_dz3 / (rootmu * dw)));
    dzeta3 = mratio * rootmu * dw;
    const double z3a = cfg.beta.lo3, z3b = cfg.beta.hi3;
    z3s.clear();
    for (double z = z3a + 0.5 * dzeta3; z < z3b; z += dzeta3) z3s.push_back(z);

    const int nz2 = static_cast<int>(64 * rf);
    gz2c = gauss_legendre(nz2, -U1 / rootmu, U1 / rootmu);
    // t-quadrature resolves zeta3 t (x2 - z2) plus the |s-r| chirp
    const double tcycles = 2.0 * cfg.beta.theta_bar * cfg.beta.hi3 *
                           (U1 / rootmu + std::abs(cfg.s - cfg.r) + 0.5) / kTwoPi;
    const int nt = static_cast<int>(std::lround((3.2 * tcycles + 32.0) * rf));
    gt = gauss_legendre(nt, cfg.beta.theta_center - cfg.beta.theta_bar,
                        cfg.beta.theta_center + cfg.beta.theta_bar);

    sect = std::make_unique<SectionTable>(cfg.window, 1.3 * U1 + 8.0, nw, dw);

    // flow representation
    ft.dt = cfg.s - cfg.r;
    ft.sym = sym;
    const bool flat = cfg.metric->profile == geom::Profile::flat;
    // x-independent branch: the cutoff's zeta2-support must avoid the
    // chi-support box |zeta2| < mu/8 (eta2 < lambda/8 at the eta level)
    const bool outside_hyp = cfg.beta.lo2 >= cfg.mu / 8.0;
    ft.analytic = flat || outside_hyp || ft.dt == 0.0;
    if (!ft.analytic) {
      if (std::abs(ft.dt) > 1.0)
        throw std::invalid_argument(
            "kernel: |s - r| > 1 requires an x-independent symbol branch");
      build_table();
    }
  }

  void build_table() {
    const double rootmu = std::sqrt(cfg.mu);
    ft.n2 = 48;
    ft.nt2 = 16;
    ft.nt3 = 16;
    // generous boxes: z2 window around 0 sized for typical x2 in [-0.5, 0.5]
    ft.z2lo = -0.6 - U1 / rootmu;
    const double z2hi = 0.6 + U1 / rootmu;
    ft.dz2 = (z2hi - ft.z2lo) / (ft.n2 - 1);
    const double rlo = cfg.beta.theta_center - 1.05 * cfg.beta.theta_bar;
    const double rhi = cfg.beta.theta_center + 1.05 * cfg.beta.theta_bar;
    ft.t2lo = rlo * cfg.beta.lo3;
    const double t2hi = rhi * cfg.beta.hi3;
    ft.dt2 = (t2hi - ft.t2lo) / (ft.nt2 - 1);
    ft.t3lo = cfg.beta.lo3 - 1.0;
    ft.dt3 = (cfg.beta.hi3 + 1.0 - ft.t3lo) / (ft.nt3 - 1);
    const std::size_t total =
        static_cast<std::size_t>(ft.n2) * ft.nt2 * ft.nt3;
    std::vector<flow::PhasePoint> seeds;
    seeds.reserve(total);
    for (int i = 0; i < ft.n2; ++i)
      for (int a = 0; a < ft.nt2; ++a)
        for (int b = 0; b < ft.nt3; ++b)
          seeds.push_back(flow::PhasePoint{
              {ft.z2lo + i * ft.dz2, 0.0},
              {ft.t2lo + a * ft.dt2, ft.t3lo + b * ft.dt3}});
    auto fm = flow::flow(ft.sym, seeds, cfg.r, cfg.s, 1e-9);
    ft.tz2f.resize(total);
    ft.tdelta3.resize(total);
    ft.tzeta2f.resize(total);
    for (std::size_t k = 0; k < total; ++k) {
      ft.tz2f[k] = fm.points[k].end.z[0];
      ft.tdelta3[k] = fm.points[k].end.z[1];  // z3 started at 0 -> shift
      ft.tzeta2f[k] = fm.points[k].end.zeta[0];
    }
  }

  // Straight-flow closed form: the z-integral is the window autocorrelation,
  //   K(y) = int beta(zeta) e^{i zeta.(x-y) - i dt q(zeta)}
  //          C2(sqrt(mu) |x - y + dt dq(zeta)|) dzeta,
  // evaluated by (t, zeta3) quadrature.  Exact for x-independent symbols.
  std::vector<cplx> synth_straight(double x2, double x3, double y2,
                                   const std::vector<double>& y3s) const {
    std::vector<cplx> out(y3s.size(), cplx(0.0));
    const double rootmu = std::sqrt(cfg.mu);
    const double dt = cfg.s - cfg.r;
    // y3 extent drives the zeta3 oscillation rate
    double ymax = 1.0;
    for (double y3 : y3s) ymax = std::max(ymax, std::abs(x3 - y3) + 1.0);
    const double tmax = std::abs(cfg.beta.theta_center) + cfg.beta.theta_bar;
    const double rate = tmax * (std::abs(x2 - y2) + 1.0) + ymax + std::abs(dt);
    const int n3 = std::max(64, static_cast<int>(
        (cfg.beta.hi3 - cfg.beta.lo3) * rate * 0.6)) ;
    auto g3 = gauss_legendre(std::min(n3, 4000), cfg.beta.lo3, cfg.beta.hi3);
    const double tcyc = 2.0 * cfg.beta.theta_bar * cfg.beta.hi3 *
                        (std::abs(x2 - y2) + std::abs(dt) + 0.5) / kTwoPi;
    const int nt = static_cast<int>(3.2 * tcyc) + 48;
    auto gtt = gauss_legendre(nt, cfg.beta.theta_center - cfg.beta.theta_bar,
                              cfg.beta.theta_center + cfg.beta.theta_bar);
    for (std::size_t i3 = 0; i3 < g3.x.size(); ++i3) {
      const double zeta3 = g3.x[i3];
      for (std::size_t it = 0; it < gtt.x.size(); ++it) {
        const double t = gtt.x[it];
        const double zeta2 = t * zeta3;
        const double bval = cfg.beta(zeta2, zeta3);
        if (bval == 0.0) continue;
        const auto d = ft.sym.eval(0.0, flow::Vec2{0.0, 0.0},
                                   flow::Vec2{zeta2, zeta3});
        const double wt = bval * gtt.w[it] * zeta3 * g3.w[i3];
        const double v2 = d.dzeta[0], v3 = d.dzeta[1];
        for (std::size_t k = 0; k < y3s.size(); ++k) {
          const double dx2 = x2 - y2, dx3 = x3 - y3s[k];
          // z-integral = C2(sqrt(mu) |(y - x) + dt v|): peak at y = x - dt v
          const double arg =
              rootmu * std::hypot(-dx2 + dt * v2, -dx3 + dt * v3);
          const double c2v = cfg.window.autocorr_radial(arg);
          if (c2v == 0.0) continue;
          const double phase = zeta2 * dx2 + zeta3 * dx3 - dt * d.q;
          out[k] += wt * c2v * std::exp(cplx(0.0, phase));
        }
      }
    }
    return out;
  }

  // Synthesize K at (x2, x3, y2) for a list of y3 values.
  std::vector<cplx> synth(double x2, double x3, double y2,
                          const std::vector<double>& y3s) const {
    std::vector<cplx> out(y3s.size(), cplx(0.0));
    if (empty) return out;
    if (ft.analytic && !cfg.force_general) return synth_straight(x2, x3, y2, y3s);
    const double rootmu = std::sqrt(cfg.mu);

    // nu lattice: nu = zeta3 + sqrt(mu) w, both uniform and coupled
    // accumulate A(nu) then evaluate sum A e^{-i nu y3}
    const double wlo = -cfg.window.c;
    // nu = zeta3_j + sqrt(mu)(wlo + i dw); index = j * mratio + i
    const int mratio = static_cast<int>(std::lround(dzeta3 / (rootmu * dw)));
    const std::size_t nnu = z3s.size() > 0
                                ? (z3s.size() - 1) * mratio + nw
                                : 0;
    std::vector<cplx> A(nnu, cplx(0.0));
    const double nu0 = z3s.empty() ? 0.0 : z3s[0] + rootmu * wlo;

    for (std::size_t j = 0; j < z3s.size(); ++j) {
      const double zeta3 = z3s[j];
      for (std::size_t it = 0; it < gt.x.size(); ++it) {
        const double ratio = gt.x[it];
        const double zeta2 = ratio * zeta3;
        const double bval = cfg.beta(zeta2, zeta3);
        if (bval == 0.0) continue;
        for (std::size_t iz = 0; iz < gz2c.x.size(); ++iz) {
          const double z2 = x2 + gz2c.x[iz];
          const auto fp = ft.eval(z2, zeta2, zeta3);
          const double a = rootmu * (x2 - z2);
          const double b = rootmu * (y2 - fp.z2f);
          if (std::abs(b) >= sect->amax) continue;
          // phase independent of y3 and w:
          //   zeta2 (x2 - z2) - zeta2f (y2 - z2f) + zeta3 (x3 + delta3)
          const double base_phase = zeta2 * (x2 - z2) - fp.zeta2f * (y2 - fp.z2f) +
                                    zeta3 * (x3 + fp.delta3);
          const double wt = bval * gt.w[it] * zeta3 * gz2c.w[iz] * dzeta3 * dw;
          const cplx base = wt * std::exp(cplx(0.0, base_phase));
          const int mid = (nw - 1) / 2;
          for (int iw = 0; iw < nw; ++iw) {
            // S is even in w; the table is indexed by |w| on the same grid
            const int aw = std::abs(iw - mid);
            const double sv = sect->at(a, aw) * sect->at(b, aw);
            if (sv == 0.0) continue;
            const double w = wlo + iw * dw;
            const cplx amp =
                base * sv * std::exp(cplx(0.0, rootmu * w * (x3 + fp.delta3)));
            A[j * mratio + iw] += amp;
          }
        }
      }
    }
    const double scale = std::sqrt(cfg.mu) / kTwoPi;
    for (std::size_t k = 0; k < y3s.size(); ++k) {
      cplx s = 0.0;
      for (std::size_t n = 0; n < A.size(); ++n) {
        if (A[n] == cplx(0.0)) continue;
        const double nu = nu0 + n * rootmu * dw;
        s += A[n] * std::exp(cplx(0.0, -nu * y3s[k]));
      }
      out[k] = scale * s;
    }
    return out;
  }
};

KernelAssembly::KernelAssembly(const KernelConfig& cfg)
    : impl_(std::make_unique<Impl>(cfg)) {}
KernelAssembly::~KernelAssembly() = default;
KernelAssembly::KernelAssembly(KernelAssembly&&) noexcept = default;

cplx KernelAssembly::value(double x2, double x3, double y2, double y3) const {
  return impl_->synth(x2, x3, y2, {y3})[0];
}

std::vector<cplx> KernelAssembly::row(double x2, double x3, double y2,
                                      const std::vector<double>& y3s) const {
  return impl_->synth(x2, x3, y2, y3s);
}

bool KernelAssembly::analytic_flow() const { return impl_->ft.analytic; }

void KernelAssembly::cosphere_point(double x2, double x3, double* x_sr,
                                    double* nu_sr) const {
  const auto& cfg = impl_->cfg;
  const double zc3 = 0.5 * (cfg.beta.lo3 + cfg.beta.hi3);
  const double zc2 = cfg.beta.theta_center * zc3;
  const auto fp = impl_->ft.eval(x2, zc2, zc3);
  x_sr[0] = fp.z2f;
  x_sr[1] = x3 + fp.delta3;
  const double n = std::hypot(fp.zeta2f, zc3);
  nu_sr[0] = fp.zeta2f / n;
  nu_sr[1] = zc3 / n;
}

KernelSample assemble_kernel(const KernelConfig& cfg,
                             const std::vector<std::array<double, 4>>& pairs) {
  KernelSample out;
  out.mu = cfg.mu;
  out.theta = cfg.theta;
  out.r = cfg.r;
  out.s = cfg.s;
  out.theta_bar = theta_bar(cfg.mu, cfg.theta, std::abs(cfg.s - cfg.r));

  KernelAssembly base(cfg);
  KernelConfig rcfg = cfg;
  rcfg.refine = 1;
  KernelAssembly fine(rcfg);

  double x_sr[2], nu_sr[2];
  double maxv = 0.0, maxdiff = 0.0;
  for (const auto& p : pairs) {
    PairSample ps;
    ps.x2 = p[0];
    ps.x3 = p[1];
    ps.y2 = p[2];
    ps.y3 = p[3];
    ps.value = base.value(p[0], p[1], p[2], p[3]);
    const cplx vf = fine.value(p[0], p[1], p[2], p[3]);
    maxv = std::max(maxv, std::abs(vf));
    maxdiff = std::max(maxdiff, std::abs(vf - ps.value));
    base.cosphere_point(p[0], p[1], x_sr, nu_sr);
    const double d2 = p[2] - x_sr[0], d3 = p[3] - x_sr[1];
    const double along = std::abs(nu_sr[0] * d2 + nu_sr[1] * d3);
    const double shape = 1.0 + cfg.mu * out.theta_bar * std::hypot(d2, d3) +
                         cfg.mu * along;
    ps.bound_model = std::pow(shape, -out.bound_N);
    out.pairs.push_back(ps);
  }
  out.refine_delta = maxv > 0.0 ? maxdiff / maxv : 0.0;
  out.converged = out.refine_delta <= 0.05;
  if (!out.converged)
    throw std::runtime_error(
        "assemble_kernel: quadrature unconverged (refinement moved values by " +
        std::to_string(100.0 * out.refine_delta) + "%)");
  return out;
}

std::string kernel_sample_csv(const KernelSample& ks) {
  std::string out = "mu,theta,r,s,x2,x3,y2,y3,absK,bound_model,ratio\n";
  char buf[64];
  auto add = [&](double v, bool comma = true) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
    if (comma) out += ",";
  };
  for (const auto& p : ks.pairs) {
    add(ks.mu); add(ks.theta); add(ks.r); add(ks.s);
    add(p.x2); add(p.x3); add(p.y2); add(p.y3);
    add(std::abs(p.value));
    add(p.bound_model);
    add(std::abs(p.value) / (ks.mu * ks.mu * ks.theta_bar * p.bound_model), false);
    out += "\n";
  }
  return out;
}

RowMass schur_row_mass(const KernelConfig& cfg, double x2, double x3, double y2) {
  KernelAssembly A(cfg);
  double x_sr[2], nu_sr[2];
  A.cosphere_point(x2, x3, x_sr, nu_sr);
  if (std::isnan(y2)) y2 = x_sr[0];  // track the flowed base point
  const double dt = std::abs(cfg.s - cfg.r);
  const double tb = theta_bar(cfg.mu, cfg.theta, dt);
  // adaptive line: start with a window ~ 60/(mu tb) around the flowed point,
  // widen until the endpoints drop below 2% of the peak
  double half = 60.0 / (cfg.mu * tb);
  const double spacing = 0.5 / cfg.mu * kTwoPi / 4.0;  // ~8 points per 1/mu
  RowMass rm;
  rm.bound = cfg.mu * cfg.theta / std::sqrt(1.0 + cfg.mu * cfg.theta * cfg.theta * dt);
  for (int attempt = 0; attempt < 5; ++attempt) {
    const int n = static_cast<int>(2.0 * half / spacing) + 1;
    std::vector<double> y3s(n);
    for (int i = 0; i < n; ++i) y3s[i] = x_sr[1] - half + i * spacing;
    auto vals = A.row(x2, x3, y2, y3s);
    double peak = 0.0;
    for (auto& v : vals) peak = std::max(peak, std::abs(v));
    const double edge = std::max(std::abs(vals.front()), std::abs(vals.back()));
    if (peak == 0.0) {
      rm.mass = 0.0;
      rm.samples = n;
      return rm;
    }
    if (edge <= 0.005 * peak) {
      double mass = 0.0;
      for (int i = 0; i < n; ++i) {
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        mass += w * std::abs(vals[i]);
      }
      rm.mass = mass * spacing;
      rm.peak = peak;
      rm.samples = n;
      rm.tail_fraction = edge / peak;
      return rm;
    }
    half *= 1.8;
  }
  throw std::runtime_error(
      "schur_row_mass: line too short; kernel tails above 0.5% of peak");
}

}  // namespace speclab::kern
