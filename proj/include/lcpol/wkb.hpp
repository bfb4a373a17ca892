#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <complex>
#include <vector>

#include "lcpol/errors.hpp"
#include "lcpol/jet.hpp"
#include "lcpol/measurement.hpp"
#include "lcpol/profile.hpp"
#include "lcpol/scaling.hpp"

namespace lcpol {

using cd = std::complex<double>;

// Sampled profiles: reject data whose scaled fourth difference is not bounded (not C^4 at grid scale).
inline void assert_c4(const ScalarProfile& q, double limit = 1e8) {
  if (q.is_piecewise()) return;
  const auto& s = q.samples();
  const double h = 1.0 / (s.size() - 1);
  double m = 0.0;
  for (size_t i = 0; i + 4 < s.size(); ++i)
    m = std::max(m, std::abs(s[i] - 4 * s[i + 1] + 6 * s[i + 2] - 4 * s[i + 3] + s[i + 4]));
  if (m / std::pow(h, 4) > limit) throw PreconditionError("wkb: coefficient is not C^4 (fourth difference unbounded)");
}

template <class F>
double integrate_segments(const F& f, const std::vector<double>& breaks, double upto = 1.0, int panels = 8) {
  double s = 0.0;
  for (size_t i = 0; i + 1 < breaks.size() && breaks[i] < upto; ++i) {
    const double a = breaks[i], b = std::min(breaks[i + 1], upto);
    for (int p = 0; p < panels; ++p) {
      const double lo = a + (b - a) * p / panels, hi = a + (b - a) * (p + 1) / panels;
      s += boost::math::quadrature::gauss<double, 20>::integrate(f, lo, hi);
    }
  }
  return s;
}

// A = (1 + x q)^(-1/4), B = -A^3 A''/4, C = (A (1 + eta^2 B / lambda^2))^(-2), x = eta^alpha / lambda^2.
class WkbCoefficients {
 public:
  WkbCoefficients(ScalarProfile q, double lambda, double eta, double alpha)
      : q_(std::move(q)), lambda_(lambda), eta_(eta), alpha_(alpha), x_(std::pow(eta, alpha) / (lambda * lambda)) {
    require(lambda > 0.0 && lambda <= 1.0, "wkb: lambda must lie in (0,1]");
    assert_c4(q_);
    require(lambda * lambda + std::pow(eta, alpha) * q_.min_value() > 0.0, "wkb: evanescent input");
    const double e = std::pow(eta, 2.0 - alpha);
    for (double t : q_.check_points(64)) {
      const double b = B(t);
      if (!(1.0 + e * b > 0.0) || !(1.0 + eta * eta / (lambda * lambda) * b > 0.0))
        throw PreconditionError("wkb: eta too large (1 + eta^(2-alpha) B <= 0)");
    }
    C0_ = C_jet(0.0);
    C1_ = C_jet(1.0);
    theta1_ = theta(1.0);
  }

  double lambda() const { return lambda_; }
  double eta() const { return eta_; }
  double alpha() const { return alpha_; }
  const ScalarProfile& q() const { return q_; }

  Jet<4> A_jet(double t) const {
    const auto qj = Jet<4>::from_derivs(q_.derivs(t));
    return pow(1.0 + x_ * qj, -0.25);
  }
  Jet<2> B_jet(double t) const {
    const auto a = A_jet(t);
    const auto app = derivative(derivative(a));
    return -0.25 * (pow(truncate<2>(a), 3.0) * app);
  }
  // C with its first two derivatives.
  Jet<2> C_jet(double t) const {
    const auto a = truncate<2>(A_jet(t));
    const auto p = a * (1.0 + (eta_ * eta_ / (lambda_ * lambda_)) * B_jet(t));
    return pow(p, -2.0);
  }
  double A(double t) const { return A_jet(t).c[0]; }
  double B(double t) const { return B_jet(t).c[0]; }
  double C(double t) const { return C_jet(t).c[0]; }
  double dC(double t) const { return C_jet(t).deriv(1); }

  // Theta(t) = (lambda/eta) int_0^t C.
  double theta(double t) const {
    return lambda_ / eta_ * integrate_segments([this](double s) { return C(s); }, q_.breakpoints(), t);
  }
  double theta1() const { return theta1_; }
  const Jet<2>& C0() const { return C0_; }
  const Jet<2>& C1() const { return C1_; }

 private:
  ScalarProfile q_;
  double lambda_, eta_, alpha_, x_;
  Jet<2> C0_, C1_;
  double theta1_ = 0.0;
};

inline WkbCoefficients wkb_coefficients(const ScalarProfile& q, double lambda, double eta, double alpha) {
  return WkbCoefficients(q, lambda, eta, alpha);
}

struct WkbEndpoint {
  double v1, v2, P1, P2;  // v(1) and (eta/lambda) v'(1)
  cd T;
  double d_prime;
};

// Endpoint values of the closed-form WKB pair given C(0), C(1), C'(0), C'(1) and Theta(1).
inline WkbEndpoint wkb_endpoint_from(double c0, double dc0, double c1, double dc1, double theta, double eta, double lambda) {
  const double h = eta / (2.0 * lambda);
  const double d0 = h * dc0 / c0;
  const double s = std::sin(theta), c = std::cos(theta);
  WkbEndpoint w;
  w.v2 = s / std::sqrt(c0 * c1);
  w.v1 = std::sqrt(c0 / c1) * c + d0 * w.v2;
  w.P2 = std::sqrt(c1 / c0) * (c - h * dc1 / (c1 * c1) * s);
  w.P1 = -std::sqrt(c0 / c1) * h * (dc1 / c1) * c - std::sqrt(c0 * c1) * s + d0 * w.P2;
  const cd i(0.0, 1.0);
  w.T = 2.0 / (i * w.P1 + w.P2 + w.v1 - i * w.v2);
  w.d_prime = w.v1 * w.v1 + w.v2 * w.v2 + w.P1 * w.P1 + w.P2 * w.P2;
  return w;
}

inline WkbEndpoint wkb_endpoint_solution(const WkbCoefficients& k) {
  return wkb_endpoint_from(k.C0().c[0], k.C0().deriv(1), k.C1().c[0], k.C1().deriv(1), k.theta1(), k.eta(), k.lambda());
}

inline MeasurementCurve wkb_data(const ScalarProfile& q, const ScalingConfig& cfg) {
  MeasurementCurve m;
  m.quantity = "D_A_prime_wkb";
  for (double l : cfg.lambda_grid) {
    const auto e = wkb_endpoint_solution(wkb_coefficients(q, l, cfg.eta, cfg.alpha));
    m.lambda.push_back(l);
    m.value.push_back(e.d_prime);
    m.sigma.push_back(cfg.noise_sigma(l));
  }
  return m;
}

// Second derivative of v1, v2 from the closed forms; returns {v1, v1'', v2, v2''} at t.
inline std::array<double, 4> wkb_second_derivs(const WkbCoefficients& k, double t) {
  const double lam = k.lambda(), eta = k.eta(), kk = lam / eta;
  const auto Cj = k.C_jet(t);
  const double C = Cj.c[0], Cp = Cj.deriv(1);
  const double c0 = k.C0().c[0], d0 = eta / (2 * lam) * k.C0().deriv(1) / c0;
  const double th = k.theta(t), th1 = kk * C, th2 = kk * Cp;
  const auto cm = pow(Cj, -0.5);  // C^(-1/2) jet
  const double g = cm.c[0], g1 = cm.deriv(1), g2 = cm.deriv(2);
  const double s = std::sin(th), c = std::cos(th);
  const double s1 = c * th1, s2 = -s * th1 * th1 + c * th2;
  const double c1 = -s * th1, c2 = -c * th1 * th1 - s * th2;
  const double a2 = 1.0 / std::sqrt(c0), a1 = std::sqrt(c0);
  const double v2 = a2 * g * s, v2pp = a2 * (g2 * s + 2 * g1 * s1 + g * s2);
  const double v1 = a1 * g * c + d0 * v2, v1pp = a1 * (g2 * c + 2 * g1 * c1 + g * c2) + d0 * v2pp;
  return {v1, v1pp, v2, v2pp};
}

// max |q~ - q| with q~ = (-eta^2 v''/v - lambda^2)/eta^alpha, over points where |v| > mask.
inline double wkb_substitution_residual(const WkbCoefficients& k, int points = 400, double mask = 0.1) {
  const double ea = std::pow(k.eta(), k.alpha()), l2 = k.lambda() * k.lambda(), e2 = k.eta() * k.eta();
  double m = 0.0;
  for (int i = 0; i <= points; ++i) {
    const double t = static_cast<double>(i) / points;
    const auto d = wkb_second_derivs(k, t);
    const double q = k.q()(t);
    if (std::abs(d[0]) > mask) m = std::max(m, std::abs((-e2 * d[1] / d[0] - l2) / ea - q));
    if (std::abs(d[2]) > mask) m = std::max(m, std::abs((-e2 * d[3] / d[2] - l2) / ea - q));
  }
  return m;
}

}  // namespace lcpol
