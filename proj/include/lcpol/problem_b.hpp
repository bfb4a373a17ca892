#pragma once

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "lcpol/errors.hpp"
#include "lcpol/profile.hpp"
#include "lcpol/scaling.hpp"

namespace lcpol {

using mp50 = boost::multiprecision::cpp_bin_float_50;
using mpc50 = boost::multiprecision::cpp_complex_50;

template <class Real>
struct ComplexOf {
  using type = std::complex<Real>;
};
template <>
struct ComplexOf<mp50> {
  using type = mpc50;
};

// Gauss-Legendre nodes over a set of cells, `panels` sub-panels each.
struct QuadRule {
  std::vector<double> x, w;
};

inline std::vector<double> quad_cells(const ScalarProfile& q) {
  if (q.is_piecewise()) return q.breakpoints();
  const size_t n = q.samples().size();
  std::vector<double> c(n);
  for (size_t i = 0; i < n; ++i) c[i] = static_cast<double>(i) / (n - 1);
  return c;
}

inline void append_gauss(QuadRule& r, double lo, double hi) {
  using G = boost::math::quadrature::gauss<double, 20>;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  const double m = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  for (size_t k = 0; k < a.size(); ++k) {
    r.x.push_back(m - h * a[k]);
    r.w.push_back(h * w[k]);
    r.x.push_back(m + h * a[k]);
    r.w.push_back(h * w[k]);
  }
}

inline QuadRule quad_rule(const std::vector<double>& cells, int panels) {
  QuadRule r;
  for (size_t i = 0; i + 1 < cells.size(); ++i)
    for (int p = 0; p < panels; ++p)
      append_gauss(r, cells[i] + (cells[i + 1] - cells[i]) * p / panels, cells[i] + (cells[i + 1] - cells[i]) * (p + 1) / panels);
  return r;
}

struct DbCurve {
  std::vector<double> lambda, value;
  double eta = 0.0, alpha = 0.0, tau = 0.0;
  std::vector<double> moments;
};

inline void check_problem_b(const ScalarProfile& q, double lambda, double ea, double tau) {
  q.require_unit_bound();
  require(lambda > 0.0 && lambda <= 1.0 + 1e-12, "problem B: lambda must lie in (0,1]");
  require(lambda * lambda >= tau * ea * (1.0 - 1e-12), "problem B: lambda below the admissible range (lambda^2 < tau eta^alpha)");
  require(1.0 + ea * q.min_value() / (lambda * lambda) > 0.0, "problem B: radicand non-positive");
}

// D_B(lambda) = int sqrt(1 + eta^alpha q / lambda^2).
inline DbCurve forward_db(const ScalarProfile& q, const ScalingConfig& cfg, int panels = 4) {
  const double ea = cfg.eta_alpha();
  const QuadRule r = quad_rule(quad_cells(q), panels);
  std::vector<double> qv(r.x.size());
  for (size_t k = 0; k < r.x.size(); ++k) qv[k] = q(r.x[k]);
  DbCurve c;
  c.eta = cfg.eta;
  c.alpha = cfg.alpha;
  c.tau = cfg.tau;
  for (double l : cfg.lambda_grid) {
    check_problem_b(q, l, ea, cfg.tau);
    double s = 0.0;
    for (size_t k = 0; k < qv.size(); ++k) s += r.w[k] * std::sqrt(1.0 + ea * qv[k] / (l * l));
    c.lambda.push_back(l);
    c.value.push_back(s);
  }
  return c;
}

// D_B'(t) = int exp(-i t q(s)) ds; panels follow the phase variation on each cell.
inline std::vector<std::complex<double>> db_prime_direct(const ScalarProfile& q, const std::vector<double>& ts) {
  const auto cells = quad_cells(q);
  double tmax = 0.0;
  for (double t : ts) tmax = std::max(tmax, std::abs(t));
  QuadRule r;
  for (size_t i = 0; i + 1 < cells.size(); ++i) {
    const double a = cells[i], b = cells[i + 1];
    double lo = INFINITY, hi = -INFINITY;
    for (int j = 0; j <= 8; ++j) {
      const double v = q(j == 8 ? std::nextafter(b, a) : a + (b - a) * j / 8.0);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const int p = (q.is_piecewise() ? 2 : 1) + static_cast<int>(std::ceil(tmax * (hi - lo) / 3.0));
    for (int k = 0; k < p; ++k) append_gauss(r, a + (b - a) * k / p, a + (b - a) * (k + 1) / p);
  }
  std::vector<double> qv(r.x.size());
  for (size_t k = 0; k < r.x.size(); ++k) qv[k] = q(r.x[k]);
  std::vector<std::complex<double>> out;
  out.reserve(ts.size());
  for (double t : ts) {
    std::complex<double> s = 0.0;
    for (size_t k = 0; k < qv.size(); ++k) s += r.w[k] * std::polar(1.0, -t * qv[k]);
    out.push_back(s);
  }
  return out;
}

// m_n = int q^n, n = 0..N.
inline std::vector<double> moments(const ScalarProfile& q, int N = 120, int panels = 32) {
  const QuadRule r = quad_rule(quad_cells(q), q.is_piecewise() ? panels : 1);
  std::vector<double> m(N + 1, 0.0);
  for (size_t k = 0; k < r.x.size(); ++k) {
    const double v = q(r.x[k]);
    double p = r.w[k];
    for (int n = 0; n <= N; ++n) {
      m[n] += p;
      p *= v;
    }
  }
  return m;
}

// K(x) = 1 + sqrt(pi x) e^x erf(sqrt x).
inline double kernel_K(double x) {
  require(x >= 0.0, "kernel_K: closed form needs x >= 0");
  const double r = std::sqrt(x);
  return 1.0 + std::sqrt(std::numbers::pi * x) * std::exp(x) * std::erf(r);
}

template <class C>
struct SeriesValue {
  C value;
  int terms;
  double truncation;  // bound on the omitted tail
};

// sqrt(pi) sum z^n / Gamma(n + 1/2); terms t_{n+1} = t_n z / (n + 1/2), t_0 = 1.
template <class C>
SeriesValue<C> kernel_series(const C& z, double tol = 1e-17, int max_terms = 100000) {
  using std::abs;
  C term = C(1), sum = C(1);
  const double az = static_cast<double>(abs(z));
  double peak = 1.0;
  for (int n = 0; n < max_terms; ++n) {
    term *= z / (n + 0.5);
    sum += term;
    const double at = static_cast<double>(abs(term));
    peak = std::max(peak, at);
    const double ratio = az / (n + 1.5);
    if (ratio < 0.5 && at <= tol * std::max(1.0, static_cast<double>(abs(sum)))) {
      return {sum, n + 2, at * ratio / (1.0 - ratio)};
    }
  }
  throw NumericalError("kernel_series: term budget exhausted");
}

struct AnnulusValue {
  std::complex<double> value;
  double tail_bound;
};

namespace annulus_detail {

// Sum_n a_n (ea / zeta^2)^n m_n with a_{n+1} = a_n * r(n).
template <class R>
AnnulusValue series(const std::vector<double>& m, double ea, double tau, std::complex<double> zeta, const R& ratio) {
  const double r = std::abs(zeta);
  require(r >= std::sqrt(ea * tau) * (1.0 - 1e-12) && r <= 1.0 + 1e-12, "db_annulus: |zeta| outside the annulus");
  require(!m.empty(), "db_annulus: empty moment sequence");
  const int N = static_cast<int>(m.size()) - 1;
  const std::complex<double> w = ea / (zeta * zeta);
  std::complex<double> s = 0.0, p = 1.0;
  double a = 1.0;
  for (int n = 0; n <= N; ++n) {
    s += a * m[n] * p;
    p *= w;
    a *= ratio(n);
  }
  const double x = ea / (r * r);
  return {s, std::pow(x, N + 1) / (1.0 - x)};
}

}  // namespace annulus_detail

// Holomorphic extension of D_B: sum binom(1/2, n) (ea/zeta^2)^n m_n.
inline AnnulusValue db_annulus(const std::vector<double>& m, double ea, double tau, std::complex<double> zeta) {
  return annulus_detail::series(m, ea, tau, zeta, [](int n) { return (0.5 - n) / (n + 1.0); });
}

inline std::complex<double> db_annulus(const ScalarProfile& q, double ea, double tau, std::complex<double> zeta, int N = 120) {
  return db_annulus(moments(q, N), ea, tau, zeta).value;
}

// (1 + zeta d/dzeta) D^_B = sum (-ea)^n Gamma(n+1/2)/(sqrt(pi) n!) zeta^(-2n) m_n, the series paired with K^.
// On the real segment it equals D_B + lambda dD_B/dlambda.
inline AnnulusValue db_annulus_weighted(const std::vector<double>& m, double ea, double tau, std::complex<double> zeta) {
  return annulus_detail::series(m, ea, tau, zeta, [](int n) { return -(n + 0.5) / (n + 1.0); });
}

// Smallest N with (ea/rho^2)^(N+1)/(1 - ea/rho^2) <= tol and |t|^(N+1)/(N+1)! <= tol.
inline int moments_needed(double ea, double rho, double tmax, double tol = 1e-12) {
  const double x = ea / (rho * rho);
  require(x < 1.0, "moments_needed: rho inside the convergence disc");
  int N = 0;
  while (std::pow(x, N + 1) / (1.0 - x) > tol) ++N;
  double term = 1.0;
  int n = 0;
  while (true) {
    term *= std::abs(tmax) / (n + 1);
    if (n + 1 > std::abs(tmax) && term <= tol) break;
    ++n;
  }
  return std::max(N, n + 1);
}

struct ContourResult {
  std::complex<double> value;
  int M = 0, n_db = 0, n_k = 0;
  double doubling_diff = 0.0;
  double cancellation = 0.0;  // max |summand| / |result|
};

namespace contour_detail {

template <class Real>
std::complex<double> to_cd(const typename ComplexOf<Real>::type& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

template <class Real>
std::complex<double> trapezoid(const std::vector<double>& m, double ea, double rho, double t, int M, int nk, double& canc) {
  using C = typename ComplexOf<Real>::type;
  const int N = static_cast<int>(m.size()) - 1;
  std::vector<Real> dcoef(N + 1), kcoef(nk + 1);
  Real c = 1, p = 1;
  const Real w = -Real(ea) / (Real(rho) * Real(rho));
  for (int n = 0; n <= N; ++n) {
    dcoef[n] = c * Real(m[n]) * p;
    c *= Real(n * 2 + 1) / Real(2 * n + 2);
    p *= w;
  }
  // sqrt(pi)/Gamma(k+1/2): g_0 = 1, g_{k+1} = g_k / (k + 1/2).
  Real g = 1;
  for (int k = 0; k <= nk; ++k) {
    kcoef[k] = g;
    g /= Real(2 * k + 1) / Real(2);
  }
  const Real pi = boost::math::constants::pi<Real>();
  const Real zr = Real(rho) * Real(rho) * Real(t) / Real(ea);
  C sum(0);
  double peak = 0.0;
  for (int j = 0; j < M; ++j) {
    const Real s = 2 * pi * j / M;
    const Real c2 = cos(2 * s), s2 = sin(2 * s);
    const C u(c2, -s2);            // zeta^-2 direction e^{-2is}
    const C z(-zr * s2, zr * c2);  // i ea^-1 rho^2 t e^{2is}
    C d(0), k(0);
    for (int n = N; n >= 0; --n) d = d * u + C(dcoef[n]);
    for (int n = nk; n >= 0; --n) k = k * z + C(kcoef[n]);
    const C term = d * k;
    peak = std::max(peak, static_cast<double>(abs(term)));
    sum += term;
  }
  sum /= Real(M);
  const auto v = to_cd<Real>(sum);
  canc = peak / std::max(std::abs(v), 1e-300);
  return v;
}

}  // namespace contour_detail

// (1/2pi) int G(rho e^{is}) K^(i ea^-1 rho^2 t e^{2is}) ds by the M-point trapezoid rule, G = (1 + zeta d/dzeta) D^_B.
// M = 0 picks M > 2 max(N, Nk), which makes the rule exact for the truncated series.
template <class Real = mp50>
ContourResult db_to_dbprime(const std::vector<double>& m, double ea, double tau, double rho, double t, int M = 0,
                            bool check_doubling = false) {
  require(rho > std::sqrt(ea * tau) && rho < 1.0, "db_to_dbprime: rho outside (sqrt(tau eta^alpha), 1)");
  require(m.size() >= 2, "db_to_dbprime: need moments");
  const double az = rho * rho * std::abs(t) / ea;
  // Kernel terms until |z|^k / Gamma(k+1/2) is 1e-30 below unity.
  int nk = 0;
  double lt = 0.0;
  while (true) {
    lt += std::log(std::max(az, 1e-300)) - std::log(nk + 0.5);
    ++nk;
    if (nk > az && lt < std::log(1e-30)) break;
    if (az == 0.0) break;
  }
  const int N = static_cast<int>(m.size()) - 1;
  const int need = 2 * std::max(N, nk) + 2;
  ContourResult r;
  r.M = M > 0 ? M : need;
  r.n_db = N;
  r.n_k = nk;
  r.value = contour_detail::trapezoid<Real>(m, ea, rho, t, r.M, nk, r.cancellation);
  const double digits = std::numeric_limits<Real>::digits10;
  if (std::log10(std::max(r.cancellation, 1.0)) > digits - 8)
    throw NumericalError("db_to_dbprime: cancellation exceeds working precision");
  if (check_doubling) {
    double c2 = 0.0;
    const auto v2 = contour_detail::trapezoid<Real>(m, ea, rho, t, 2 * r.M, nk, c2);
    r.doubling_diff = std::abs(v2 - r.value);
    if (r.doubling_diff > 1e-6) throw NumericalError("db_to_dbprime: M-doubling disagreement");
  }
  return r;
}

struct HankelLaplacePoint {
  double lambda, lhs, rhs;
};

struct HankelBudget {
  int r_panels_per_unit = 1;
  int v_panels_base = 2;
  double v_phase_per_panel = 2.0;  // radians of J0 oscillation per v-panel
  double laplace_decay = 40.0;     // truncate at Lambda_min r = this
};

struct HankelLaplaceReport {
  std::vector<HankelLaplacePoint> points;
  double doubling_diff = 0.0;  // max |rhs(budget) - rhs(2x budget)|
};

namespace hankel_detail {

// Q(v) = dq^-1/dy at y = v^2: 1/q'(s) with q(s) = v^2.
inline double Q(const ScalarProfile& q, double v) {
  const double y = v * v;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (q(mid) < y) lo = mid; else hi = mid;
  }
  return 1.0 / q.derivative(0.5 * (lo + hi), 1);
}

inline std::vector<double> rhs(const ScalarProfile& q, const std::vector<double>& Lams, double ea, const HankelBudget& b, int mult) {
  const double v0 = std::sqrt(q(0.0)), v1 = std::sqrt(q(1.0));
  double lmin = INFINITY;
  for (double L : Lams) lmin = std::min(lmin, L);
  const double R = b.laplace_decay / lmin;
  const int rp = mult * std::max(1, static_cast<int>(std::ceil(R * b.r_panels_per_unit)));
  QuadRule rr;
  for (int p = 0; p < rp; ++p) append_gauss(rr, R * p / rp, R * (p + 1) / rp);
  // v nodes are shared; the panel count follows the largest r.
  const int vp = mult * (b.v_panels_base + static_cast<int>(std::ceil(R * (v1 - v0) / b.v_phase_per_panel)));
  QuadRule vr;
  for (int p = 0; p < vp; ++p) append_gauss(vr, v0 + (v1 - v0) * p / vp, v0 + (v1 - v0) * (p + 1) / vp);
  std::vector<double> vq(vr.x.size());
  for (size_t k = 0; k < vr.x.size(); ++k) vq[k] = vr.w[k] * vr.x[k] * Q(q, vr.x[k]);
  std::vector<double> F(rr.x.size());
  for (size_t i = 0; i < rr.x.size(); ++i) {
    double s = 0.0;
    for (size_t k = 0; k < vr.x.size(); ++k) s += vq[k] * std::cyl_bessel_j(0.0, rr.x[i] * vr.x[k]);
    F[i] = s;
  }
  std::vector<double> out;
  for (double L : Lams) {
    double s = 0.0;
    for (size_t i = 0; i < rr.x.size(); ++i) s += rr.w[i] * std::exp(-L * rr.x[i]) * F[i];
    out.push_back(2.0 / std::sqrt(ea) * s);
  }
  return out;
}

}  // namespace hankel_detail

// lhs = D_B/lambda + dD_B/dlambda under the integral; rhs = (2/sqrt(ea)) L[F0 Q](lambda/sqrt(ea)).
inline HankelLaplaceReport hankel_laplace_check(const ScalarProfile& q, const std::vector<double>& lambdas, double ea,
                                                const HankelBudget& b = {}) {
  require(q(0.0) >= 0.0, "hankel_laplace_check: q(0) must be non-negative");
  for (double t : q.check_points())
    if (!(q.derivative(t, 1) > 0.0)) throw PreconditionError("hankel_laplace_check: q must be strictly increasing with q' > 0");
  q.require_unit_bound();
  const QuadRule r = quad_rule(quad_cells(q), 8);
  std::vector<double> Lams;
  HankelLaplaceReport rep;
  for (double l : lambdas) {
    require(l > 0.0, "hankel_laplace_check: lambda must be positive");
    double d = 0.0, dd = 0.0;
    for (size_t k = 0; k < r.x.size(); ++k) {
      const double qv = q(r.x[k]), rad = std::sqrt(1.0 + ea * qv / (l * l));
      d += r.w[k] * rad;
      dd += r.w[k] * (-ea * qv / (l * l * l * rad));
    }
    rep.points.push_back({l, d / l + dd, 0.0});
    Lams.push_back(l / std::sqrt(ea));
  }
  const auto r1 = hankel_detail::rhs(q, Lams, ea, b, 1);
  const auto r2 = hankel_detail::rhs(q, Lams, ea, b, 2);
  for (size_t i = 0; i < r1.size(); ++i) {
    rep.points[i].rhs = r2[i];
    rep.doubling_diff = std::max(rep.doubling_diff, std::abs(r2[i] - r1[i]));
  }
  return rep;
}

// Closed form for q(t) = t.
inline double hankel_laplace_linear(double lambda, double ea) {
  const double L = lambda / std::sqrt(ea);
  return 2.0 / std::sqrt(ea) * (std::sqrt(1.0 + L * L) - L);
}

// Data-driven dD_B/dlambda by central differences on a uniform grid; the noise gain is 1/(sqrt(2) h).
struct DbDerivative {
  std::vector<double> lambda, value;
  double noise_gain = 0.0;
};

inline DbDerivative db_derivative_fd(const DbCurve& c) {
  require(c.lambda.size() >= 3, "db_derivative_fd: need at least three samples");
  DbDerivative d;
  const double h = c.lambda[1] - c.lambda[0];
  for (size_t i = 1; i + 1 < c.lambda.size(); ++i) {
    require(std::abs((c.lambda[i + 1] - c.lambda[i]) - h) <= 1e-9 * std::abs(h), "db_derivative_fd: grid must be uniform");
    d.lambda.push_back(c.lambda[i]);
    d.value.push_back((c.value[i + 1] - c.value[i - 1]) / (2.0 * h));
  }
  d.noise_gain = 1.0 / (std::sqrt(2.0) * h);
  return d;
}

struct MonotoneReconstruction {
  double q0 = 0.0, q1 = 0.0;
  std::vector<double> y, rho;
  ScalarProfile qhat;
  double mass = 0.0, min_rho = 0.0, max_rho = 0.0;
  double tail = 0.0;              // max |D_B'| over the last tenth of the window
  double self_consistency = 0.0;  // sup |D_B'[qhat] - input|
  double T = 0.0;
};

struct ReconstructOptions {
  double y_half_range = 1.5;
  int y_points = 6001;
  int profile_points = 1001;
  double negative_tol = 0.25;  // relative to max rho
  double threshold = 0.5;      // support edge at this fraction of the typical density level
};

// Uniform grid t_k = k dt on [0, T] for the Fourier route; spacing pi/(4 range), range = 2 for |q| <= 1.
inline std::vector<double> fourier_grid(double T, double value_range = 2.0) {
  const double dt = std::numbers::pi / (4.0 * value_range);
  std::vector<double> ts;
  const long n = static_cast<long>(std::floor(T / dt + 1e-9));
  for (long k = 0; k <= n; ++k) ts.push_back(k * dt);
  return ts;
}

// Density by inverse Fourier quadrature with a raised-cosine window, support at a density threshold,
// then q^ = F^-1 of the normalized cumulative density.
inline MonotoneReconstruction reconstruct_monotone(const std::vector<double>& ts, const std::vector<std::complex<double>>& d,
                                                   const ReconstructOptions& o = {}) {
  require(ts.size() == d.size() && ts.size() >= 8, "reconstruct_monotone: need matching samples");
  const double dt = ts[1] - ts[0];
  require(dt > 0.0, "reconstruct_monotone: grid must increase");
  for (size_t k = 1; k < ts.size(); ++k)
    require(std::abs(ts[k] - ts[k - 1] - dt) <= 1e-9 * dt, "reconstruct_monotone: grid must be uniform");
  require(std::abs(ts.front()) <= 1e-12 * dt || std::abs(ts.front() + ts.back()) <= 1e-9 * dt,
          "reconstruct_monotone: grid must be [0, T] or [-T, T]");
  std::vector<double> tt;
  std::vector<std::complex<double>> dd;
  if (std::abs(ts.front()) <= 1e-12 * dt) {
    // Real q: D(-t) = conj D(t).
    for (size_t k = ts.size() - 1; k >= 1; --k) {
      tt.push_back(-ts[k]);
      dd.push_back(std::conj(d[k]));
    }
  }
  tt.insert(tt.end(), ts.begin(), ts.end());
  dd.insert(dd.end(), d.begin(), d.end());
  MonotoneReconstruction r;
  r.T = tt.back();
  for (size_t k = 0; k < tt.size(); ++k)
    if (std::abs(tt[k]) >= 0.9 * r.T) r.tail = std::max(r.tail, std::abs(dd[k]));
  std::vector<std::complex<double>> wd(tt.size());
  for (size_t k = 0; k < tt.size(); ++k) {
    double w = 0.5 * (1.0 + std::cos(std::numbers::pi * tt[k] / r.T));
    if (k == 0 || k + 1 == tt.size()) w *= 0.5;
    wd[k] = w * dd[k] * dt / (2.0 * std::numbers::pi);
  }
  const int ny = o.y_points;
  const double dy = 2.0 * o.y_half_range / (ny - 1);
  r.y.resize(ny);
  r.rho.resize(ny);
  for (int j = 0; j < ny; ++j) {
    const double y = -o.y_half_range + j * dy;
    double s = 0.0;
    for (size_t k = 0; k < tt.size(); ++k) s += (wd[k] * std::polar(1.0, tt[k] * y)).real();
    r.y[j] = y;
    r.rho[j] = s;
  }
  r.max_rho = *std::max_element(r.rho.begin(), r.rho.end());
  r.min_rho = *std::min_element(r.rho.begin(), r.rho.end());
  r.mass = 0.0;
  for (double v : r.rho) r.mass += v * dy;
  if (r.min_rho < -o.negative_tol * r.max_rho)
    throw NumericalError("reconstruct_monotone: negative density beyond tolerance (non-monotone or noisy input)");
  std::vector<double> big;
  for (double v : r.rho)
    if (v > 0.1 * r.max_rho) big.push_back(v);
  require(!big.empty(), "reconstruct_monotone: support detection failed");
  std::nth_element(big.begin(), big.begin() + big.size() / 2, big.end());
  const double level = o.threshold * big[big.size() / 2];
  int i0 = -1, i1 = -1;
  for (int j = 0; j < ny; ++j)
    if (r.rho[j] > level) {
      if (i0 < 0) i0 = j;
      i1 = j;
    }
  if (i0 < 0 || (i1 - i0) * dy < 4.0 * std::numbers::pi / r.T)
    throw PreconditionError("reconstruct_monotone: support detection failed (support below resolution, degenerate profile)");
  r.q0 = r.y[i0];
  r.q1 = r.y[i1];
  std::vector<double> F(i1 - i0 + 1, 0.0);
  for (int j = i0 + 1; j <= i1; ++j) F[j - i0] = F[j - i0 - 1] + std::max(r.rho[j], 0.0) * dy;
  const double tot = F.back();
  for (double& v : F) v /= tot;
  std::vector<double> qs(o.profile_points);
  for (int i = 0; i < o.profile_points; ++i) {
    const double t = static_cast<double>(i) / (o.profile_points - 1);
    auto it = std::lower_bound(F.begin(), F.end(), t);
    size_t k = static_cast<size_t>(it - F.begin());
    if (k == 0) {
      qs[i] = r.y[i0];
    } else if (k >= F.size()) {
      qs[i] = r.y[i1];
    } else {
      const double f = (t - F[k - 1]) / (F[k] - F[k - 1]);
      qs[i] = r.y[i0 + k - 1] + f * dy;
    }
  }
  r.qhat = ScalarProfile::sampled(std::move(qs), 1);
  const auto back = db_prime_direct(r.qhat, ts);
  for (size_t k = 0; k < ts.size(); ++k) r.self_consistency = std::max(r.self_consistency, std::abs(back[k] - d[k]));
  return r;
}

// Singular values of K f(x) = int_0^1 sqrt(1 + x y) f(y) dy by midpoint discretization.
inline Eigen::VectorXd sqrt_kernel_singular_values(int n = 50) {
  Eigen::MatrixXd K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) K(i, j) = std::sqrt(1.0 + (i + 0.5) / n * (j + 0.5) / n) / n;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(K).singularValues();
}

}  // namespace lcpol
