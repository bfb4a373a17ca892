#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "lcpol/errors.hpp"
#include "lcpol/measurement.hpp"
#include "lcpol/scaling.hpp"

namespace lcpol {

struct MomentEstimate {
  std::array<double, 5> A{};
  std::array<double, 5> err{};
  double residual_rms = 0.0;    // in rescaled units (4 lambda^4 / eta^(2 alpha)) (D' - 2)
  double noise_budget = 0.0;    // same units
  double phi1 = 0.0;            // phase offset at lambda = 1 implied by A4, A5
  bool phase_identified = true;
  int points = 0;
};

namespace extraction_detail {

struct Data {
  Eigen::ArrayXd lambda, x, y;  // x = eta^alpha / lambda^2, y = rescaled data
  double eta, alpha;
};

inline Eigen::ArrayXd full_phase(const Data& d, double a4, double a5) {
  // Theta(1) = (lambda/eta)(1 + x A4/2 - x^2 A5/8); the data oscillates with 2 Theta.
  return (d.lambda / d.eta) * (1.0 + d.x * a4 / 2.0 - d.x * d.x * a5 / 8.0);
}

// Endpoint WKB amplitude model with q1'/q1 = A3/2, q0'/q0 = -A3/2; returns the rescaled D'.
inline Eigen::ArrayXd model(const Data& d, const Eigen::VectorXd& p) {
  const double a1 = p(0), a2 = p(1), a3 = p(2), a4 = p(3), a5 = p(4);
  const double sq = std::sqrt(std::max(a1 * a1 - 4.0 * a2, 0.0));
  const double q0 = 0.5 * (a1 - sq), q1 = 0.5 * (a1 + sq);
  const double p1 = q1 * a3 / 2.0, p0 = -q0 * a3 / 2.0;
  const Eigen::ArrayXd& x = d.x;
  const Eigen::ArrayXd c0 = (1.0 + x * q0).sqrt(), c1 = (1.0 + x * q1).sqrt();
  const Eigen::ArrayXd dc0 = x * p0 / (2.0 * c0), dc1 = x * p1 / (2.0 * c1);
  const Eigen::ArrayXd h = d.eta / (2.0 * d.lambda);
  const Eigen::ArrayXd th = full_phase(d, a4, a5);
  const Eigen::ArrayXd s = th.sin(), c = th.cos();
  const Eigen::ArrayXd d0 = h * dc0 / c0;
  const Eigen::ArrayXd v2 = s / (c0 * c1).sqrt();
  const Eigen::ArrayXd P2 = (c1 / c0).sqrt() * (c - h * dc1 / (c1 * c1) * s);
  const Eigen::ArrayXd v1 = (c0 / c1).sqrt() * c + d0 * v2;
  const Eigen::ArrayXd P1 = -(c0 / c1).sqrt() * h * (dc1 / c1) * c - (c0 * c1).sqrt() * s + d0 * P2;
  const Eigen::ArrayXd S = v1 * v1 + v2 * v2 + P1 * P1 + P2 * P2;
  return 4.0 * (S - 2.0) / (x * x);
}

struct Functor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  const Data* d;
  int inputs() const { return 5; }
  int values() const { return static_cast<int>(d->y.size()); }
  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& f) const {
    f = (model(*d, p) - d->y).matrix();
    return 0;
  }
};

// Truncated model, linear part for fixed (A4, A5): basis {1, x, cos, x cos, (eta/lambda) sin} of 2 Theta.
struct LinearFit {
  double rss;
  Eigen::VectorXd coef;
};

inline LinearFit linear_fit(const Data& d, double a4, double a5) {
  const Eigen::ArrayXd ph = 2.0 * full_phase(d, a4, a5);
  Eigen::MatrixXd M(d.y.size(), 5);
  M.col(0).setOnes();
  M.col(1) = d.x.matrix();
  M.col(2) = ph.cos().matrix();
  M.col(3) = (d.x * ph.cos()).matrix();
  M.col(4) = ((d.eta / d.lambda) * ph.sin()).matrix();
  LinearFit f;
  f.coef = M.colPivHouseholderQr().solve(d.y.matrix());
  f.rss = (M * f.coef - d.y.matrix()).squaredNorm();
  return f;
}

}  // namespace extraction_detail

// Moments A1..A5 from sampled D' on lambda in [1/2, 1].
inline MomentEstimate extract_moments(const MeasurementCurve& curve, const ScalingConfig& cfg) {
  using namespace extraction_detail;
  std::vector<double> lam, val, sig;
  for (size_t i = 0; i < curve.lambda.size(); ++i)
    if (curve.lambda[i] >= 0.5 - 1e-12 && curve.lambda[i] <= 1.0 + 1e-12) {
      lam.push_back(curve.lambda[i]);
      val.push_back(curve.value[i]);
      sig.push_back(i < curve.sigma.size() ? curve.sigma[i] : 0.0);
    }
  const double eta = cfg.eta, alpha = cfg.alpha;
  require(lam.size() >= 12, "extract_moments: too few samples in [1/2, 1]");
  for (size_t i = 1; i < lam.size(); ++i)
    require(lam[i] - lam[i - 1] <= eta * eta * (1.0 + 1e-9), "extract_moments: grid spacing exceeds eta^2");
  require(lam.front() <= 0.5 + eta * eta && lam.back() >= 1.0 - eta * eta, "extract_moments: data must cover [1/2, 1]");

  Data d;
  const int n = static_cast<int>(lam.size());
  d.eta = eta;
  d.alpha = alpha;
  d.lambda = Eigen::Map<Eigen::ArrayXd>(lam.data(), n);
  d.x = std::pow(eta, alpha) / (d.lambda * d.lambda);
  const Eigen::ArrayXd raw = Eigen::Map<Eigen::ArrayXd>(val.data(), n);
  d.y = 4.0 / (d.x * d.x) * (raw - 2.0);

  MomentEstimate m;
  m.points = n;
  // Noise budget in rescaled units: sigma of D' is about 8 sigma_T; default to the error-scale rule when noiseless.
  double budget2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s_t = std::max(sig[i], cfg.noise_sigma(lam[i]));
    const double s = 4.0 / (d.x(i) * d.x(i)) * 8.0 * s_t;
    budget2 += s * s;
  }
  m.noise_budget = std::sqrt(budget2 / n);

  // Stage 1: separable search over (A4, A5).
  std::vector<std::pair<double, std::array<double, 5>>> starts;
  for (int i4 = 0; i4 <= 80; ++i4) {
    const double a4 = -1.0 + 2.0 * i4 / 80.0;
    for (int i5 = 0; i5 <= 4; ++i5) {
      const double a5 = 0.25 * i5;
      const auto f = linear_fit(d, a4, a5);
      const double a2 = -0.5 * f.coef(2);
      const double a1 = std::abs(a2) > 1e-12 ? f.coef(3) / a2 : std::sqrt(std::max(f.coef(0), 0.0));
      const double a3 = std::abs(a2) > 1e-12 ? f.coef(4) / a2 : 0.0;
      starts.push_back({f.rss, {a1, a2, std::clamp(a3, -20.0, 20.0), a4, a5}});
    }
  }
  std::sort(starts.begin(), starts.end(), [](auto& a, auto& b) {
    return a.first < b.first || (a.first == b.first && a.second < b.second);
  });

  // Phase identifiability: the oscillating part must stand out of the budget.
  const double osc = std::abs(starts.front().second[1]) * 2.0;
  if (osc < 3.0 * m.noise_budget) {
    m.phase_identified = false;
    const double off = (d.y.sum() / n);
    m.A = {std::sqrt(std::max(off, 0.0)), 0.0, 0.0, 0.0, 0.0};
    const double inf = std::numeric_limits<double>::infinity();
    m.err = {m.noise_budget, m.noise_budget, inf, inf, inf};
    m.residual_rms = std::sqrt((d.y - off).square().mean());
    return m;
  }

  // Stage 2: Levenberg-Marquardt on the refined model from the best separable starts.
  Functor fun{&d};
  Eigen::NumericalDiff<Functor> nd(fun);
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd bestp(5);
  const int nstarts = std::min<int>(12, static_cast<int>(starts.size()));
  for (int s = 0; s < nstarts; ++s) {
    const auto& st = starts[s].second;
    std::vector<Eigen::VectorXd> inits;
    Eigen::VectorXd p(5);
    p << st[0], st[1], st[2], st[3], st[4];
    inits.push_back(p);
    p(2) = 0.0;
    inits.push_back(p);
    for (auto& p0 : inits) {
      Eigen::VectorXd x = p0;
      Eigen::LevenbergMarquardt<Eigen::NumericalDiff<Functor>> lm(nd);
      lm.parameters.ftol = 1e-15;
      lm.parameters.xtol = 1e-15;
      lm.parameters.maxfev = 4000;
      lm.minimize(x);
      Eigen::VectorXd f;
      fun(x, f);
      const double c = f.squaredNorm();
      if (std::isfinite(c) && (c < best || (c == best && std::lexicographical_compare(x.data(), x.data() + 5, bestp.data(), bestp.data() + 5)))) {
        best = c;
        bestp = x;
      }
    }
  }
  for (int k = 0; k < 5; ++k) m.A[k] = bestp(k);
  m.residual_rms = std::sqrt(best / n);
  m.phi1 = 2.0 / eta * (m.A[3] / 2.0 * std::pow(eta, alpha) - std::pow(eta, 2 * alpha) * m.A[4] / 8.0);

  // Linearized covariance scaled by the residual.
  Eigen::MatrixXd J(n, 5);
  nd.df(bestp, J);
  const double s2 = best / std::max(1, n - 5);
  const Eigen::MatrixXd cov = s2 * (J.transpose() * J).completeOrthogonalDecomposition().pseudoInverse();
  for (int k = 0; k < 5; ++k) m.err[k] = std::sqrt(std::max(cov(k, k), 0.0));

  if (m.residual_rms > 10.0 * m.noise_budget)
    throw NumericalError("extract_moments: model mismatch (residual " + std::to_string(m.residual_rms) + " > 10x budget " +
                         std::to_string(m.noise_budget) + ")");
  return m;
}

struct EndpointPair {
  double a, b;
};

inline EndpointPair endpoint_values(double a1, double a2, double tol = 1e-6) {
  const double disc = a1 * a1 - 4.0 * a2;
  require(disc >= -tol, "endpoint_values: inconsistent moments (negative discriminant)");
  const double s = std::sqrt(std::max(disc, 0.0));
  return {0.5 * (a1 - s), 0.5 * (a1 + s)};
}

inline EndpointPair endpoint_values(const MomentEstimate& m, double tol = 1e-6) { return endpoint_values(m.A[0], m.A[1], tol); }

}  // namespace lcpol
