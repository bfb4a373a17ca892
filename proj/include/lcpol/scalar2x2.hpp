#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "lcpol/berreman.hpp"
#include "lcpol/errors.hpp"
#include "lcpol/measurement.hpp"
#include "lcpol/profile.hpp"
#include "lcpol/rng.hpp"
#include "lcpol/scaling.hpp"

namespace lcpol {

struct ScalarOptions {
  double c_step = 40.0;
  bool richardson = false;
  double wronskian_tol = 1e-7;
};

// Endpoint data of w1 (w=1, p=0) and w2 (w=0, p=1), p = w'/f, and the derived t, r.
struct ScalarTransmission {
  cd t, r;
  double w1 = 0, w2 = 0, p1 = 0, p2 = 0;
  cd e1, e2;
  double wronskian_drift = 0.0;
  int steps = 0;
};

inline ScalarTransmission assemble_scalar(double w1, double p1, double w2, double p2) {
  ScalarTransmission s;
  s.w1 = w1;
  s.p1 = p1;
  s.w2 = w2;
  s.p2 = p2;
  const cd i(0.0, 1.0);
  s.e1 = p1 - i * w1;
  s.e2 = p2 - i * w2;
  const cd den = s.e2 + i * s.e1;
  s.t = 2.0 / den;
  s.r = (i * s.e1 - s.e2) / den;
  return s;
}

// d/dx((1/f) w') + g w = 0, integrated as w' = f p, p' = -g w.
template <class F, class G>
ScalarTransmission solve_scalar(const F& f, const G& g, const std::vector<double>& breaks, const ScalarOptions& o = {}) {
  double fmax = 0.0;
  for (size_t i = 0; i + 1 < breaks.size(); ++i)
    for (int j = 0; j <= 16; ++j) {
      double t = breaks[i] + (breaks[i + 1] - breaks[i]) * j / 16.0;
      if (j == 16) t = std::nextafter(breaks[i + 1], breaks[i]);
      const double fv = f(t), gv = g(t);
      if (!(fv > 0.0) || !(gv > 0.0)) throw PreconditionError("solve_scalar: f and g must be positive");
      fmax = std::max({fmax, fv, gv});
    }
  // Same resolution as the 4x4 rule when f = g = 1/eta.
  const long n = static_cast<long>(std::ceil(o.c_step * (1.0 + 2.0 * fmax)));
  auto gen = [&](double t) {
    Eigen::Matrix2d m;
    m << 0.0, f(t), -g(t), 0.0;
    return m;
  };
  auto run = [&](long steps, double& drift, int& count) {
    const auto grid = aligned_grid(breaks, steps);
    count = static_cast<int>(grid.size() - 1);
    drift = 0.0;
    return detail::rk4_aligned(gen, Eigen::Matrix2d(Eigen::Matrix2d::Identity()), grid, breaks,
                               [&](double, const Eigen::Matrix2d& y) { drift = std::max(drift, std::abs(y.determinant() - 1.0)); });
  };
  double drift = 0.0;
  int steps = 0;
  Eigen::Matrix2d y = run(n, drift, steps);
  if (o.richardson) {
    double d2 = 0.0;
    const Eigen::Matrix2d yf = run(2 * n, d2, steps);
    y = (16.0 * yf - y) / 15.0;
    drift = std::max(d2, std::abs(y.determinant() - 1.0));
  }
  if (!(drift <= o.wronskian_tol)) throw NumericalError("solve_scalar: Wronskian drift " + std::to_string(drift) + " exceeds tolerance");
  auto s = assemble_scalar(y(0, 0), y(1, 0), y(0, 1), y(1, 1));
  s.wronskian_drift = drift;
  s.steps = steps;
  return s;
}

inline ScalarTransmission solve_scalar(const ScalarProfile& f, const ScalarProfile& g, const ScalarOptions& o = {}) {
  std::vector<double> b = f.breakpoints();
  b.insert(b.end(), g.breakpoints().begin(), g.breakpoints().end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return solve_scalar([&](double t) { return f(t); }, [&](double t) { return g(t); }, b, o);
}

inline void check_problem_a(const ScalarProfile& q, double lambda, double eta, double alpha) {
  require(lambda > 0.0 && lambda <= 1.0, "problem A: lambda must lie in (0,1]");
  require(eta > 0.0 && eta < 1.0, "problem A: eta must lie in (0,1)");
  q.require_unit_bound();
  require(lambda * lambda + std::pow(eta, alpha) * q.min_value() > 0.0, "problem A: evanescent input (lambda^2 + eta^alpha q <= 0)");
}

// Full endpoint data for Problem A: f = lambda/eta, g = (lambda^2 + eta^alpha q)/(eta lambda).
inline ScalarTransmission problem_a_solve(const ScalarProfile& q, double lambda, double eta, double alpha,
                                          const ScalarOptions& o = {}) {
  check_problem_a(q, lambda, eta, alpha);
  const double ea = std::pow(eta, alpha), f = lambda / eta;
  return solve_scalar([f](double) { return f; }, [&](double t) { return (lambda * lambda + ea * q(t)) / (eta * lambda); },
                      q.breakpoints(), o);
}

inline cd problem_a_transmission(const ScalarProfile& q, double lambda, double eta, double alpha, const ScalarOptions& o = {}) {
  return problem_a_solve(q, lambda, eta, alpha, o).t;
}

inline ScalarTransmission slab_oracle(double q0, double lambda, double eta, double alpha) {
  const double k2 = lambda * lambda + std::pow(eta, alpha) * q0;
  require(k2 > 0.0, "slab_oracle: evanescent regime rejected");
  const double k = std::sqrt(k2) / eta, f = lambda / eta;
  return assemble_scalar(std::cos(k), -(k / f) * std::sin(k), (f / k) * std::sin(k), std::cos(k));
}

struct DataA {
  MeasurementCurve d_a;        // |T| (+ noise)
  MeasurementCurve d_a_prime;  // 4/D_A^2 - 2
};

inline DataA data_a(const ScalarProfile& q, const ScalingConfig& cfg, bool noisy, const ScalarOptions& o = {}) {
  DataA d;
  d.d_a.quantity = "D_A";
  d.d_a_prime.quantity = "D_A_prime";
  d.d_a.noisy = d.d_a_prime.noisy = noisy;
  for (size_t i = 0; i < cfg.lambda_grid.size(); ++i) {
    const double l = cfg.lambda_grid[i];
    double v = std::abs(problem_a_transmission(q, l, cfg.eta, cfg.alpha, o));
    const double sig = cfg.noise_sigma(l);
    if (noisy) v += sig * normal_draw(cfg.rng_seed, i);
    d.d_a.lambda.push_back(l);
    d.d_a.value.push_back(v);
    d.d_a.sigma.push_back(noisy ? sig : 0.0);
    d.d_a_prime.lambda.push_back(l);
    d.d_a_prime.value.push_back(4.0 / (v * v) - 2.0);
    d.d_a_prime.sigma.push_back(noisy ? 8.0 * sig / (v * v * v) : 0.0);
  }
  return d;
}

}  // namespace lcpol
