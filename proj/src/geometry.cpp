#include "speclab/geometry.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "speclab/fft.hpp"

namespace speclab::geom {

namespace {

// x1 taper: 1 on |x1| <= 1/2, 0 for |x1| >= 0.7, so that fields are exactly
// euclidean for |x| >= 3/4 (the x2 profiles vanish well before x2 = 0.27).
double taper1(double x1v) {
  return bump::Plateau{-0.7, -0.5, 0.5, 0.7}(x1v);
}

// Disk profile: true boundary-layer deviation capped so sup-norm stays below
// c0.  dev(a) = c0/2.5 and the cutoff closes by 2a; the product stays under
// 0.85*c0 for c0 <= 0.5.
struct DiskShape {
  double a;
  explicit DiskShape(double c0) { a = 1.0 - 1.0 / std::sqrt(1.0 + c0 / 2.5); }
  double dev_g11(double x2) const {
    const double t = std::abs(x2);
    if (t >= 2.0 * a) return 0.0;
    return (disk_g11_raw(t) - 1.0) * bump::step_down(t, a, 2.0 * a);
  }
  double dev_rho(double x2) const {
    const double t = std::abs(x2);
    if (t >= 2.0 * a) return 0.0;
    return (disk_rho_raw(t) - 1.0) * bump::step_down(t, a, 2.0 * a);
  }
};

// Custom perturbation: amplitude exactly c0, kink slope proportional to c0.
// Used for smallness sweeps where the whole perturbation must scale.
struct CustomShape {
  double norm_g, norm_r;
  CustomShape() {
    norm_g = 0.0;
    norm_r = 0.0;
    for (double t = 0.0; t <= 0.5; t += 1e-4) {
      norm_g = std::max(norm_g, std::abs(shape_g(t)));
      norm_r = std::max(norm_r, std::abs(shape_r(t)));
    }
  }
  static double shape_g(double t) {
    return t * bump::step_down(t, 0.15, 0.5);
  }
  static double shape_r(double t) {
    return -0.5 * t * bump::step_down(t, 0.1, 0.4);
  }
  double dev_g11(double c0, double x2) const {
    return c0 * 0.98 * shape_g(std::abs(x2)) / norm_g;
  }
  double dev_rho(double c0, double x2) const {
    return c0 * 0.98 * shape_r(std::abs(x2)) / norm_r;
  }
};

const CustomShape& custom_shape() {
  static const CustomShape s;
  return s;
}

}  // namespace

double disk_g11_dual_raw(double x2) { return (1.0 - x2) * (1.0 - x2); }
double disk_g11_raw(double x2) { return 1.0 / disk_g11_dual_raw(x2); }
double disk_rho_raw(double x2) { return 1.0 - x2; }

double MetricModel::g11_at(double x1v, double x2v) const {
  const double t = std::abs(x2v);
  switch (profile) {
    case Profile::flat:
      return 1.0;
    case Profile::disk:
      return 1.0 + taper1(x1v) * DiskShape(c0).dev_g11(t);
    case Profile::custom:
      return 1.0 + taper1(x1v) * custom_shape().dev_g11(c0, t);
  }
  return 1.0;
}

double MetricModel::rho_at(double x1v, double x2v) const {
  const double t = std::abs(x2v);
  switch (profile) {
    case Profile::flat:
      return 1.0;
    case Profile::disk:
      return 1.0 + taper1(x1v) * DiskShape(c0).dev_rho(t);
    case Profile::custom:
      return 1.0 + taper1(x1v) * custom_shape().dev_rho(c0, t);
  }
  return 1.0;
}

double MetricModel::W_at(double x1v, double x2v) const {
  return 1.0 / std::sqrt(g11_at(x1v, x2v));
}

MetricModel build_model_metric(Profile p, Grid1 gx1, Grid1 gx2, double c0) {
  if (gx2.dx <= 0.0 || gx1.dx <= 0.0)
    throw std::invalid_argument("build_model_metric: grid spacing must be positive");
  if (c0 <= 0.0 || c0 >= 0.5)
    throw std::invalid_argument("build_model_metric: c0 must lie in (0, 1/2)");
  if (std::abs(gx2.x0) > 1e-12 * gx2.dx)
    throw std::invalid_argument(
        "build_model_metric: grid must contain the boundary row x2 = 0");

  MetricModel m;
  m.profile = p;
  m.c0 = c0;
  m.x1 = gx1;
  m.x2 = gx2;
  m.rho.resize(static_cast<std::size_t>(gx1.n) * gx2.n);
  m.g11.resize(m.rho.size());
  for (int i = 0; i < gx1.n; ++i)
    for (int j = 0; j < gx2.n; ++j) {
      const double x1v = gx1.x(i), x2v = gx2.x(j);
      m.rho[i * gx2.n + j] = m.rho_at(x1v, x2v);
      m.g11[i * gx2.n + j] = m.g11_at(x1v, x2v);
    }
  // condition (2.3): sup deviation bounded by c0; (2.1): boundary row exact
  double dev = 0.0;
  for (std::size_t k = 0; k < m.rho.size(); ++k) {
    dev = std::max(dev, std::abs(m.rho[k] - 1.0));
    dev = std::max(dev, std::abs(m.g11[k] - 1.0));
  }
  if (dev > c0)
    throw std::runtime_error("build_model_metric: smallness bound c0 violated");
  return m;
}

MetricModel extend_even(const MetricModel& m) {
  if (m.extended) throw std::invalid_argument("extend_even: already extended");
  const int nh = m.x2.n;  // half-grid points at x2 = j h, j = 0..nh-1
  const double h = m.x2.dx;
  const int nd = 2 * (nh - 1);  // doubled periodic grid [-X2, X2)
  const double X2 = (nh - 1) * h;

  MetricModel e = m;
  e.extended = true;
  e.x2 = Grid1{-X2, h, nd};
  e.rho.assign(static_cast<std::size_t>(m.x1.n) * nd, 0.0);
  e.g11.assign(e.rho.size(), 0.0);
  for (int i = 0; i < m.x1.n; ++i)
    for (int j = 0; j < nd; ++j) {
      const int jh = std::abs(j - (nh - 1));  // reflected half index
      e.rho[i * nd + j] = m.rho[i * nh + jh];
      e.g11[i * nd + j] = m.g11[i * nh + jh];
    }

  // measured Lipschitz norm (first differences) and second difference at 0
  double lip = 0.0, sd = 0.0;
  for (int i = 0; i < m.x1.n; ++i) {
    for (int j = 0; j + 1 < nd; ++j)
      lip = std::max(lip, std::abs(e.g11[i * nd + j + 1] - e.g11[i * nd + j]) / h);
    const int j0 = nh - 1;  // x2 = 0 row in the doubled ordering
    const double d2 = (e.g11[i * nd + j0 + 1] - 2.0 * e.g11[i * nd + j0] +
                       e.g11[i * nd + j0 - 1]) /
                      (h * h);
    sd = std::max(sd, std::abs(d2));
  }
  e.lipschitz_g11 = lip;
  e.second_diff_at_0 = sd;
  return e;
}

std::vector<double> extend_data(const std::vector<double>& f, const Grid1& gx1,
                                const Grid1& gx2, Parity parity, double trace_tol) {
  const int nh = gx2.n;
  if (f.size() != static_cast<std::size_t>(gx1.n) * nh)
    throw std::invalid_argument("extend_data: field size does not match grid");
  if (parity == Parity::odd) {
    double trace = 0.0;
    for (int i = 0; i < gx1.n; ++i) trace = std::max(trace, std::abs(f[i * nh]));
    if (trace > trace_tol) {
      std::ostringstream os;
      os << "extend_data: odd parity requires zero Dirichlet trace; max |f(x1,0)| = "
         << trace;
      throw std::invalid_argument(os.str());
    }
  }
  const int nd = 2 * (nh - 1);
  std::vector<double> out(static_cast<std::size_t>(gx1.n) * nd, 0.0);
  const double sign = parity == Parity::odd ? -1.0 : 1.0;
  for (int i = 0; i < gx1.n; ++i)
    for (int j = 0; j < nd; ++j) {
      const int off = j - (nh - 1);  // signed x2 index
      const int jh = std::abs(off);
      const double s = off < 0 ? sign : 1.0;
      out[i * nd + j] = s * f[i * nh + jh];
    }
  return out;
}

// --------------------------------------------------------------------------
// Symbol

namespace {

// smooth max(1, t): equals 1 for t <= 1/2, t for t >= 2
double mval(double t) {
  const double e = bump::step_up(t, 0.5, 2.0);
  return (1.0 - e) + e * t;
}
double mval_d1(double t) {
  const double e = bump::step_up(t, 0.5, 2.0);
  const double ed = bump::step_up_d1(t, 0.5, 2.0);
  return ed * (t - 1.0) + e;
}
double mval_d2(double t) {
  const double e = bump::step_up_d1(t, 0.5, 2.0);
  const double edd = bump::step_up_d2(t, 0.5, 2.0);
  return edd * (t - 1.0) + 2.0 * e;
}

}  // namespace

XiDerivs SymbolModel::A(double xi2, double xi3) const {
  XiDerivs out;
  const double c2 = chi2(xi2), c3 = chi3(xi3);
  if (c2 == 0.0 || c3 == 0.0) return out;
  const double rad = xi3 * xi3 - xi2 * xi2;
  if (rad <= 0.0)
    throw std::runtime_error("symbol: negative radicand inside hyperbolic region");
  const double r = std::sqrt(rad);
  const double r2 = -xi2 / r, r3 = xi3 / r;
  const double r22 = -xi3 * xi3 / (rad * r);
  const double r33 = -xi2 * xi2 / (rad * r);
  const double r23 = xi2 * xi3 / (rad * r);
  const double c2d = chi2.d1(xi2), c2dd = chi2.d2(xi2);
  const double c3d = chi3.d1(xi3), c3dd = chi3.d2(xi3);
  out.v = c2 * c3 * r;
  out.d2 = c2d * c3 * r + c2 * c3 * r2;
  out.d3 = c2 * c3d * r + c2 * c3 * r3;
  out.d22 = c2dd * c3 * r + 2.0 * c2d * c3 * r2 + c2 * c3 * r22;
  out.d33 = c2 * c3dd * r + 2.0 * c2 * c3d * r3 + c2 * c3 * r33;
  out.d23 = c2d * c3d * r + c2d * c3 * r3 + c2 * c3d * r2 + c2 * c3 * r23;
  return out;
}

XiDerivs SymbolModel::B(double xi2, double xi3) const {
  XiDerivs out;
  const double c = chi2(xi2) * chi3(xi3);
  const double t = std::hypot(xi2, xi3);
  const double mv = mval(t);
  if (t < 1e-14) {  // m == 1 near the origin
    out.v = 1.0 - c;
    return out;
  }
  const double md = mval_d1(t), mdd = mval_d2(t);
  const double t2 = xi2 / t, t3 = xi3 / t;
  const double t22 = xi3 * xi3 / (t * t * t);
  const double t33 = xi2 * xi2 / (t * t * t);
  const double t23 = -xi2 * xi3 / (t * t * t);
  // m as a function of xi
  const double m2 = md * t2, m3 = md * t3;
  const double m22 = mdd * t2 * t2 + md * t22;
  const double m33 = mdd * t3 * t3 + md * t33;
  const double m23 = mdd * t2 * t3 + md * t23;
  const double c2 = chi2(xi2), c3 = chi3(xi3);
  const double c2d = chi2.d1(xi2), c2dd = chi2.d2(xi2);
  const double c3d = chi3.d1(xi3), c3dd = chi3.d2(xi3);
  const double u = 1.0 - c;
  const double u2 = -c2d * c3, u3 = -c2 * c3d;
  const double u22 = -c2dd * c3, u33 = -c2 * c3dd, u23 = -c2d * c3d;
  out.v = u * mv;
  out.d2 = u2 * mv + u * m2;
  out.d3 = u3 * mv + u * m3;
  out.d22 = u22 * mv + 2.0 * u2 * m2 + u * m22;
  out.d33 = u33 * mv + 2.0 * u3 * m3 + u * m33;
  out.d23 = u23 * mv + u2 * m3 + u3 * m2 + u * m23;
  return out;
}

int SymbolModel::row_of(double x1) const {
  const double u = (x1 - metric.x1.x0) / metric.x1.dx;
  int i = static_cast<int>(std::lround(u));
  i = std::max(0, std::min(metric.x1.n - 1, i));
  return i;
}

double SymbolModel::W(int row, double x2) const {
  if (cutoff == 0.0) return metric.W_at(metric.x1.x(row), x2);
  const double X2 = 0.5 * metric.x2.length();
  const auto& a = wrow[row];
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] != 0.0) s += a[k] * std::cos(k * kPi * x2 / X2);
  return s;
}

double SymbolModel::W_d1(int row, double x2) const {
  if (cutoff == 0.0)
    throw std::logic_error("symbol: x-derivatives require a truncated symbol");
  const double X2 = 0.5 * metric.x2.length();
  const auto& a = wrow[row];
  double s = 0.0;
  for (std::size_t k = 1; k < a.size(); ++k)
    if (a[k] != 0.0) {
      const double w = k * kPi / X2;
      s -= a[k] * w * std::sin(w * x2);
    }
  return s;
}

double SymbolModel::W_d2(int row, double x2) const {
  if (cutoff == 0.0)
    throw std::logic_error("symbol: x-derivatives require a truncated symbol");
  const double X2 = 0.5 * metric.x2.length();
  const auto& a = wrow[row];
  double s = 0.0;
  for (std::size_t k = 1; k < a.size(); ++k)
    if (a[k] != 0.0) {
      const double w = k * kPi / X2;
      s -= a[k] * w * w * std::cos(w * x2);
    }
  return s;
}

bool SymbolModel::row_uniform_center() const {
  const int r0 = row_of(0.0);
  const int rp = row_of(0.45);
  if (wrow[r0].size() != wrow[rp].size()) return false;
  for (std::size_t k = 0; k < wrow[r0].size(); ++k)
    if (std::abs(wrow[r0][k] - wrow[rp][k]) > 1e-13) return false;
  return true;
}

double SymbolModel::p(double x1, double x2, double xi2, double xi3) const {
  const XiDerivs a = A(xi2, xi3), b = B(xi2, xi3);
  if (a.v == 0.0) return b.v;
  return a.v * W(row_of(x1), x2) + b.v;
}

SymbolModel build_symbol(const MetricModel& m, double lambda) {
  if (!m.extended)
    throw std::invalid_argument("build_symbol: metric must be extended first");
  if (lambda < 4.0) throw std::invalid_argument("build_symbol: lambda >= 4");

  SymbolModel s;
  s.lambda = lambda;
  s.cutoff = 0.0;
  s.metric = m;
  s.chi2 = bump::Plateau{-lambda / 8.0, -lambda / 9.0, lambda / 9.0, lambda / 8.0};
  s.chi3 = bump::Plateau{lambda / 4.0, lambda / 3.0, 3.0 * lambda, 4.0 * lambda};

  // cosine series of W per x1 row on [0, X2]; rows differ only through the
  // x1 taper, so identical rows share one transform
  const int nd = m.x2.n;
  const int nh = nd / 2;  // X2 / h
  s.n_half = nh;
  const double h = m.x2.dx;
  s.wrow.resize(m.x1.n);
  std::vector<std::pair<std::vector<double>, int>> seen;  // (samples, row)
  for (int i = 0; i < m.x1.n; ++i) {
    std::vector<double> samples(nh + 1);
    for (int j = 0; j <= nh; ++j)
      samples[j] = m.W_at(m.x1.x(i), j * h);
    int dup = -1;
    for (auto& [v, idx] : seen)
      if (v == samples) {
        dup = idx;
        break;
      }
    if (dup >= 0) {
      s.wrow[i] = s.wrow[dup];
      continue;
    }
    s.wrow[i] = fft::cosine_coefficients(samples, nh);
    seen.emplace_back(std::move(samples), i);
  }

  // verify the factorization identity a11 (xi1^2 - p^2) = sum a^jj xi_j^2 on
  // the hyperbolic region (relative 1e-10)
  for (int i = 0; i < m.x1.n; i += std::max(1, m.x1.n / 8))
    for (double x2 : {0.0, 0.01, 0.1, -0.07}) {
      for (double f2 : {-1.0 / 9.0, 0.0, 1.0 / 10.0})
        for (double f3 : {1.0 / 3.0, 1.0, 2.9}) {
          const double xi2 = f2 * lambda, xi3 = f3 * lambda;
          const double x1v = m.x1.x(i);
          const double pv = s.p(x1v, x2, xi2, xi3);
          const double rho = m.rho_at(x1v, x2);
          const double g11 = m.g11_at(x1v, x2);
          const double a11 = -rho * g11, a22 = -rho, a33 = rho;
          const double xi1 = 0.37 * lambda;
          const double lhs = a11 * (xi1 * xi1 - pv * pv);
          const double rhs = a11 * xi1 * xi1 + a22 * xi2 * xi2 + a33 * xi3 * xi3;
          const double scale = std::abs(a33) * xi3 * xi3;
          if (std::abs(lhs - rhs) > 1e-10 * scale)
            throw std::runtime_error("build_symbol: factorization identity failed");
        }
    }
  return s;
}

SymbolModel truncate_symbol(const SymbolModel& s, double cutoff) {
  const double nyq = kPi / s.metric.x2.dx;
  if (cutoff <= 0.0 || cutoff > nyq)
    throw std::invalid_argument("truncate_symbol: cutoff must lie in (0, Nyquist]");
  SymbolModel t = s;
  t.cutoff = cutoff;
  const double X2 = 0.5 * s.metric.x2.length();
  for (auto& row : t.wrow) {
    for (std::size_t k = 1; k < row.size(); ++k) {
      const double xi = k * kPi / X2;
      // smooth radial rolloff: 1 below 3c/4, 0 at c (width c/4)
      row[k] *= bump::step_down(xi, 0.75 * cutoff, cutoff);
    }
  }
  return t;
}

// --------------------------------------------------------------------------
// serialization

static void save_fields(std::ostream& os, const MetricModel& m) {
  os.precision(17);
  os << "speclab-metric v1\n";
  os << "profile " << static_cast<int>(m.profile) << "\n";
  os << "c0 " << m.c0 << "\n";
  os << "extended " << (m.extended ? 1 : 0) << "\n";
  os << "lipschitz_g11 " << m.lipschitz_g11 << "\n";
  os << "second_diff_at_0 " << m.second_diff_at_0 << "\n";
  os << "grid x1 " << m.x1.x0 << " " << m.x1.dx << " " << m.x1.n << "\n";
  os << "grid x2 " << m.x2.x0 << " " << m.x2.dx << " " << m.x2.n << "\n";
  for (const char* name : {"rho", "g11"}) {
    const auto& v = std::string(name) == "rho" ? m.rho : m.g11;
    os << "field " << name << " row-major " << v.size() << "\n";
    for (std::size_t i = 0; i < v.size(); ++i)
      os << v[i] << ((i + 1) % 8 == 0 ? "\n" : " ");
    os << "\n";
  }
}

void save_metric(const MetricModel& m, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_metric: cannot open " + path);
  save_fields(os, m);
}

MetricModel load_metric(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_metric: cannot open " + path);
  std::string tok, ver;
  is >> tok >> ver;
  if (tok != "speclab-metric") throw std::runtime_error("load_metric: bad header");
  MetricModel m;
  int prof = 0, ext = 0;
  while (is >> tok) {
    if (tok == "profile") {
      is >> prof;
      m.profile = static_cast<Profile>(prof);
    } else if (tok == "c0") {
      is >> m.c0;
    } else if (tok == "extended") {
      is >> ext;
      m.extended = ext != 0;
    } else if (tok == "lipschitz_g11") {
      is >> m.lipschitz_g11;
    } else if (tok == "second_diff_at_0") {
      is >> m.second_diff_at_0;
    } else if (tok == "grid") {
      std::string axis;
      is >> axis;
      Grid1 g;
      is >> g.x0 >> g.dx >> g.n;
      (axis == "x1" ? m.x1 : m.x2) = g;
    } else if (tok == "field") {
      std::string name, layout;
      std::size_t n;
      is >> name >> layout >> n;
      std::vector<double> v(n);
      for (auto& x : v) is >> x;
      (name == "rho" ? m.rho : m.g11) = std::move(v);
    }
  }
  return m;
}

}  // namespace speclab::geom
