#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "lcpol/berreman.hpp"
#include "lcpol/errors.hpp"
#include "lcpol/profile.hpp"
#include "lcpol/scalar2x2.hpp"
#include "lcpol/scaling.hpp"

namespace lcpol {

// Running integral I(t) = int_0^t w(s) ds on a breakpoint-aligned grid, by composite Simpson per cell.
// Between nodes, I is the cubic Hermite interpolant using the exact integrand as slope.
class CumulativeIntegral {
 public:
  CumulativeIntegral() = default;
  CumulativeIntegral(const std::function<double(double)>& w, const std::vector<double>& breaks, long n = 2048)
      : t_(aligned_grid(breaks, n)) {
    const size_t m = t_.size();
    v_.assign(m, 0.0);
    sl_.assign(m, 0.0);
    sr_.assign(m, 0.0);
    size_t bi = 1;
    for (size_t k = 0; k + 1 < m; ++k) {
      const double a = t_[k], b = t_[k + 1];
      while (bi + 1 < breaks.size() && breaks[bi] <= a) ++bi;
      const double bend = (b >= breaks[bi]) ? std::nextafter(b, a) : b;
      const double fa = w(a), fm = w(0.5 * (a + b)), fb = w(bend);
      v_[k + 1] = v_[k] + (b - a) / 6.0 * (fa + 4.0 * fm + fb);
      sr_[k] = fa;       // slope leaving node k to the right
      sl_[k + 1] = fb;   // slope arriving at node k+1 from the left
    }
  }

  double total() const { return v_.back(); }
  const std::vector<double>& nodes() const { return t_; }
  const std::vector<double>& values() const { return v_; }

  double operator()(double t) const {
    const size_t k = cell(t);
    return hermite(k, t);
  }

  // Slope (integrand) used by the interpolant at t.
  double slope(double t) const {
    const size_t k = cell(t);
    const double h = t_[k + 1] - t_[k], u = (t - t_[k]) / h;
    const double dh00 = 6 * u * u - 6 * u, dh10 = 3 * u * u - 4 * u + 1, dh01 = -dh00, dh11 = 3 * u * u - 2 * u;
    return (dh00 * v_[k] + dh01 * v_[k + 1]) / h + dh10 * sr_[k] + dh11 * sl_[k + 1];
  }

  // Smallest t with I(t) = v, for v in [0, total]; bisection then Newton polish inside the cell.
  double inverse(double v) const {
    require(v >= -1e-14 && v <= total() + 1e-14, "CumulativeIntegral::inverse: value out of range");
    auto it = std::lower_bound(v_.begin(), v_.end(), v);
    size_t k = (it == v_.begin()) ? 0 : static_cast<size_t>(it - v_.begin()) - 1;
    k = std::min(k, t_.size() - 2);
    double lo = t_[k], hi = t_[k + 1];
    for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (hermite(k, mid) < v) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
  }

 private:
  size_t cell(double t) const {
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    size_t k = (it == t_.begin()) ? 0 : static_cast<size_t>(it - t_.begin()) - 1;
    return std::min(k, t_.size() - 2);
  }
  double hermite(size_t k, double t) const {
    const double h = t_[k + 1] - t_[k], u = (t - t_[k]) / h;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u), h01 = u * u * (3 - 2 * u),
                 h11 = u * u * (u - 1);
    return h00 * v_[k] + h10 * h * sr_[k] + h01 * v_[k + 1] + h11 * h * sl_[k + 1];
  }

  std::vector<double> t_, v_, sl_, sr_;
};

struct UniaxialReduction {
  double delta = 0.0, eta = 0.0, eta_tilde = 0.0, normalizer = 0.0, K = 0.0;
  ScalarProfile tilt;
  CumulativeIntegral tau_hat;  // unnormalized: tau(t) = tau_hat(t) / normalizer
  std::vector<double> tau_breaks;

  double tau(double t) const { return tau_hat(t) / normalizer; }
  double mu(double tau_value) const { return tau_hat.inverse(std::clamp(tau_value, 0.0, 1.0) * normalizer); }
  double q_eff(double tau_value) const {
    const double r = std::sqrt(1.0 - delta * delta);
    return delta / r * (std::cos(2.0 * tilt(mu(tau_value))) + delta / (1.0 + r));
  }
  // Piecewise Chebyshev representation of q_eff in the tau variable.
  ScalarProfile q_eff_profile(int segments = 32, int degree = 11) const {
    return ScalarProfile::from_function([this](double x) { return q_eff(x); }, segments, degree, tau_breaks);
  }
};

inline UniaxialReduction reduce(const ScalarProfile& tilt, double delta, double eta, long n = 2048) {
  require(std::abs(delta) < 1.0, "reduce: |delta| must be below 1");
  require(eta > 0.0, "reduce: eta must be positive");
  UniaxialReduction u;
  u.delta = delta;
  u.eta = eta;
  u.tilt = tilt;
  const auto& br = tilt.breakpoints();
  u.tau_hat = CumulativeIntegral([&](double s) { return 1.0 / (1.0 + delta * std::cos(2.0 * tilt(s))); }, br, n);
  u.normalizer = u.tau_hat.total();
  u.eta_tilde = eta / (std::sqrt(1.0 - delta * delta) * u.normalizer);
  CumulativeIntegral k([&](double s) { return std::sin(2.0 * tilt(s)) / (1.0 + delta * std::cos(2.0 * tilt(s))); }, br, n);
  u.K = k.total();
  for (double b : br) u.tau_breaks.push_back(b == 0.0 ? 0.0 : (b == 1.0 ? 1.0 : u.tau(b)));
  return u;
}

inline cd phase_factor_from_K(double K, double delta, double eta, double lambda) {
  require(lambda > 0.0 && lambda <= 1.0, "phase_factor: lambda must lie in (0,1]");
  return std::exp(cd(0.0, delta * std::sqrt(std::max(0.0, 1.0 - lambda * lambda)) * K / eta));
}

inline cd phase_factor(const ScalarProfile& tilt, double delta, double eta, double lambda) {
  return phase_factor_from_K(reduce(tilt, delta, eta).K, delta, eta, lambda);
}

// T(lambda) of the reduced scalar problem in the tau variable.
inline cd reduced_transmission(const UniaxialReduction& u, double lambda, const ScalarOptions& o = {}) {
  require(lambda > 0.0 && lambda <= 1.0, "reduced_transmission: lambda must lie in (0,1]");
  const double et = u.eta_tilde, f = lambda / et;
  return solve_scalar([f](double) { return f; }, [&](double x) { return (lambda * lambda + u.q_eff(x)) / (et * lambda); },
                      u.tau_breaks, o)
      .t;
}

struct UniaxialData {
  std::vector<double> lambda;
  std::vector<cd> T, F, TF, T_over_F;
  double K = 0.0;
};

inline UniaxialData uniaxial_data(const ScalarProfile& tilt, double delta, double eta, const std::vector<double>& lambdas,
                                  const ScalarOptions& o = {}) {
  const auto u = reduce(tilt, delta, eta);
  UniaxialData d;
  d.K = u.K;
  for (double l : lambdas) {
    const cd T = reduced_transmission(u, l, o);
    const cd F = phase_factor_from_K(u.K, delta, eta, l);
    d.lambda.push_back(l);
    d.T.push_back(T);
    d.F.push_back(F);
    d.TF.push_back(T * F);
    d.T_over_F.push_back(T / F);
  }
  return d;
}

// Permittivities with the given delta and eps_perp * eps_par = n0^4.
inline std::pair<double, double> permittivities_from_delta(double delta, double n0) {
  const double n2 = n0 * n0;
  return {n2 * std::sqrt((1 + delta) / (1 - delta)), n2 * std::sqrt((1 - delta) / (1 + delta))};
}

// T1 of the full 4x4 solve for the in-plane uniaxial cell (azimuth 0), incidence I = (1, 0).
inline cd uniaxial_berreman_T1(const ScalarProfile& tilt, double delta, double eta, double lambda, int sign = 1,
                               BerremanOptions o = {}, double n0 = 1.52) {
  const auto [ep, ea] = permittivities_from_delta(delta, n0);
  const auto prof = DielectricProfile::uniaxial(tilt, ScalarProfile::constant(0.0), ep, ea);
  ScalingConfig cfg;
  cfg.eta = eta;
  cfg.n0 = uniaxial_delta(ep, ea).n0;
  o.sign = sign;
  return transmission(prof, cfg, lambda, 1.0, 0.0, o).T1;
}

struct ProblemCResult {
  double s0 = 0.0, s1 = 0.0;
  double band0 = 0.0, band1 = 0.0;  // half-width of the answers under D_C -> D_C +- delta^2
  double G1 = 0.0;
};

inline ProblemCResult problem_c_solve(const ScalarProfile& abs_psi, double delta, double d_c, long n = 4096) {
  require(std::abs(delta) < 1.0, "problem_c: |delta| must be below 1");
  for (double t : abs_psi.check_points())
    require(abs_psi(t) >= -1e-12 && abs_psi(t) <= std::numbers::pi + 1e-12, "problem_c: |psi| must lie in [0, pi]");
  auto w = [&](double s) {
    const double a = abs_psi(s);
    return std::sin(a) / (1.0 + delta * std::cos(a));
  };
  CumulativeIntegral G(w, abs_psi.breakpoints(), n);
  const double g1 = G.total();
  require(g1 > 0.0, "problem_c: G(1) = 0, |psi| vanishes identically");
  require(-g1 < d_c && d_c < g1, "problem_c: D_C outside (-G(1), G(1))");
  auto root = [&](double target) {
    target = std::clamp(target, 0.0, g1);
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-15) {
      const double mid = 0.5 * (lo + hi), gm = G(mid);
      if (std::abs(gm - target) <= 1e-12) {
        lo = hi = mid;
        break;
      }
      if (gm < target) lo = mid; else hi = mid;
    }
    const double s = 0.5 * (lo + hi);
    if (!(w(s) > 1e-10)) throw PreconditionError("problem_c: G is flat near the root (|psi| in {0, pi})");
    return s;
  };
  ProblemCResult r;
  r.G1 = g1;
  r.s0 = root(0.5 * g1 + 0.5 * d_c);
  r.s1 = root(0.5 * g1 - 0.5 * d_c);
  const double dd = delta * delta;
  if (-g1 < d_c - dd && d_c + dd < g1) {
    r.band0 = 0.5 * std::abs(root(0.5 * g1 + 0.5 * (d_c + dd)) - root(0.5 * g1 + 0.5 * (d_c - dd)));
    r.band1 = 0.5 * std::abs(root(0.5 * g1 - 0.5 * (d_c + dd)) - root(0.5 * g1 - 0.5 * (d_c - dd)));
  }
  return r;
}

// D_C estimated from the phase of F^2 = T1(+theta)/T1(-theta); Problem C's angle is twice the tilt.
inline double d_c_from_phase(cd t1_plus, cd t1_minus, double delta, double eta, double lambda) {
  const double ph = std::arg(t1_plus / t1_minus);
  return ph * eta / (2.0 * delta * std::sqrt(1.0 - lambda * lambda));
}

}  // namespace lcpol
