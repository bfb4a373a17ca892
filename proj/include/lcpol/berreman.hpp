#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "lcpol/errors.hpp"
#include "lcpol/profile.hpp"
#include "lcpol/scaling.hpp"

namespace lcpol {

using cd = std::complex<double>;
using Mat4 = Eigen::Matrix<cd, 4, 4>;
using Vec4 = Eigen::Matrix<cd, 4, 1>;

// Constant pairing matrix: swaps components (1,2) and (3,4).
inline Mat4 flip_matrix() {
  Mat4 d = Mat4::Zero();
  d(0, 1) = d(1, 0) = d(2, 3) = d(3, 2) = 1.0;
  return d;
}

// B for a rescaled tensor e = eps/n0^2 and s = sin(theta) (signed).
inline Mat4 berreman_matrix(const Tensor3& e, double lambda, double s) {
  require(lambda != 0.0, "berreman_matrix: lambda must be nonzero");
  require(e.e33 > 0.0, "berreman_matrix: eps33 must be positive");
  const double l = lambda, i33 = 1.0 / e.e33;
  Mat4 b = Mat4::Zero();
  b(0, 0) = -s * e.e13 * i33;
  b(0, 1) = (l * l + e.e33 - 1.0) / l * i33;
  b(0, 3) = -s * e.e23 / l * i33;
  b(1, 0) = l * (e.e11 * e.e33 - e.e13 * e.e13) * i33;
  b(1, 1) = -s * e.e13 * i33;
  b(1, 3) = (e.e12 * e.e33 - e.e13 * e.e23) * i33;
  b(2, 0) = (e.e12 * e.e33 - e.e13 * e.e23) * i33;
  b(2, 1) = -s * e.e23 / l * i33;
  b(2, 3) = ((l * l + e.e22 - 1.0) * e.e33 - e.e23 * e.e23) / l * i33;
  b(3, 2) = l;
  return b;
}

inline Tensor3 rescaled(const Tensor3& e, double n0) {
  const double k = 1.0 / (n0 * n0);
  return {e.e11 * k, e.e22 * k, e.e33 * k, e.e12 * k, e.e13 * k, e.e23 * k};
}

// sign = +1 or -1 selects the sign of sin(theta).
inline Mat4 berreman_matrix(const DielectricProfile& p, const ScalingConfig& cfg, double t, double lambda, int sign = 1) {
  require(lambda > 0.0 && lambda <= 1.0, "berreman_matrix: lambda must lie in (0,1]");
  const double s = sign * std::sqrt(std::max(0.0, 1.0 - lambda * lambda));
  return berreman_matrix(rescaled(p.at(t), cfg.n0), lambda, s);
}

struct BerremanOptions {
  double c_step = 40.0;
  bool richardson = false;
  bool store = true;
  int sign = 1;
  double flux_tol = 1e-6;
};

struct FundamentalSolution {
  std::vector<double> t;
  std::vector<Mat4> phi;  // empty unless options.store
  Mat4 phi1;
  int steps = 0;
  double flux_drift = 0.0;         // max over stored (or final) t of ||conj(Phi)^T D Phi - D||_inf
  double richardson_error = 0.0;   // ||Phi_fine(1) - Phi_coarse(1)||_inf when richardson is on
};

inline double inf_norm(const Mat4& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

inline double flux_defect(const Mat4& phi) {
  const Mat4 d = flip_matrix();
  return inf_norm(phi.adjoint() * d * phi - d);
}

// Integration grid aligned to breakpoints; n total steps distributed by segment length.
inline std::vector<double> aligned_grid(const std::vector<double>& breaks, long n) {
  std::vector<double> g{0.0};
  for (size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    const long m = std::max<long>(1, static_cast<long>(std::ceil(n * (b - a) - 1e-9)));
    for (long j = 1; j <= m; ++j) g.push_back(j == m ? b : a + (b - a) * j / m);
  }
  return g;
}

namespace detail {

// Generic RK4 for Y' = M(t) Y on a breakpoint-aligned grid. m(t) returns the generator.
// Stage evaluations at a segment's right end use the left limit.
template <class Gen, class Y, class Post>
Y rk4_aligned(const Gen& m, Y y, const std::vector<double>& grid, const std::vector<double>& breaks, Post&& post) {
  size_t bi = 1;
  for (size_t k = 0; k + 1 < grid.size(); ++k) {
    const double a = grid[k], b = grid[k + 1], h = b - a;
    while (bi + 1 < breaks.size() && breaks[bi] <= a) ++bi;
    const double bend = (b >= breaks[bi]) ? std::nextafter(b, a) : b;
    const auto m0 = m(a), mh = m(a + 0.5 * h), m1 = m(bend);
    const Y k1 = m0 * y;
    const Y k2 = mh * (y + (0.5 * h) * k1);
    const Y k3 = mh * (y + (0.5 * h) * k2);
    const Y k4 = m1 * (y + h * k3);
    y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    post(b, y);
  }
  return y;
}

}  // namespace detail

inline long berreman_steps(const DielectricProfile& p, const ScalingConfig& cfg, double lambda, const BerremanOptions& o) {
  double maxb = 0.0;
  std::vector<double> pts;
  for (size_t c = 0; c < p.components(); ++c) {
    auto cp = p.component(c).check_points(16);
    pts.insert(pts.end(), cp.begin(), cp.end());
  }
  for (double t : pts) maxb = std::max(maxb, inf_norm(berreman_matrix(p, cfg, t, lambda, o.sign)));
  return static_cast<long>(std::ceil(o.c_step * (1.0 + maxb) / cfg.eta));
}

// Phi' = (i/eta) B Phi, Phi(0) = Id.
inline FundamentalSolution fundamental_solution(const DielectricProfile& p, const ScalingConfig& cfg, double lambda,
                                                const BerremanOptions& o = {}) {
  const auto breaks = p.breakpoints();
  const long n = berreman_steps(p, cfg, lambda, o);
  if (n > 50'000'000) throw NumericalError("fundamental_solution: step count underflow for eta = " + std::to_string(cfg.eta));
  const cd ie(0.0, 1.0 / cfg.eta);
  auto gen = [&](double t) -> Mat4 { return ie * berreman_matrix(p, cfg, t, lambda, o.sign); };
  auto run = [&](long steps, bool keep, FundamentalSolution& fs) {
    const auto grid = aligned_grid(breaks, steps);
    fs.steps = static_cast<int>(grid.size() - 1);
    fs.flux_drift = 0.0;
    if (keep) {
      fs.t = grid;
      fs.phi.clear();
      fs.phi.reserve(grid.size());
      fs.phi.push_back(Mat4::Identity());
    }
    Mat4 y = detail::rk4_aligned(gen, Mat4(Mat4::Identity()), grid, breaks, [&](double, const Mat4& yy) {
      if (keep) {
        fs.phi.push_back(yy);
        fs.flux_drift = std::max(fs.flux_drift, flux_defect(yy));
      }
    });
    if (!keep) fs.flux_drift = flux_defect(y);
    return y;
  };
  FundamentalSolution fs;
  if (!o.richardson) {
    fs.phi1 = run(n, o.store, fs);
    return fs;
  }
  FundamentalSolution coarse;
  const Mat4 yc = run(n, false, coarse);
  const Mat4 yf = run(2 * n, o.store, fs);
  fs.phi1 = (16.0 * yf - yc) / 15.0;
  fs.richardson_error = inf_norm(yf - yc);
  if (!o.store) fs.flux_drift = flux_defect(fs.phi1);
  return fs;
}

struct TransmissionResult {
  double lambda = 0.0;
  cd T1, T2, R1, R2;
  double det_a1 = 0.0;
  double residual = 0.0;
  double flux_drift = 0.0;
};

inline TransmissionResult solve_transmission(const Mat4& phi, cd i1, cd i2, double flux_tol = 1e-6) {
  const double defect = flux_defect(phi);
  if (!(defect <= flux_tol))
    throw NumericalError("solve_transmission: flux identity violated on input (defect " + std::to_string(defect) + ")");
  Mat4 a1, a2;
  for (int r = 0; r < 4; ++r) {
    a1(r, 0) = phi(r, 1) - phi(r, 0);
    a1(r, 1) = phi(r, 3) - phi(r, 2);
    a1(r, 2) = (r < 2) ? -1.0 : 0.0;
    a1(r, 3) = (r < 2) ? 0.0 : -1.0;
    a2(r, 0) = (r == 0) ? -1.0 : (r == 1 ? 1.0 : 0.0);
    a2(r, 1) = (r == 2) ? -1.0 : (r == 3 ? 1.0 : 0.0);
    a2(r, 2) = -(phi(r, 0) + phi(r, 1));
    a2(r, 3) = -(phi(r, 2) + phi(r, 3));
  }
  Vec4 b;
  b << 0.0, 0.0, i1, i2;
  const Vec4 rhs = a2 * b;
  Eigen::PartialPivLU<Mat4> lu(a1);
  const Vec4 x = lu.solve(rhs);
  TransmissionResult r;
  r.R1 = x(0);
  r.R2 = x(1);
  r.T1 = x(2);
  r.T2 = x(3);
  r.det_a1 = std::abs(lu.determinant());
  r.residual = (a1 * x - rhs).cwiseAbs().maxCoeff() / std::max(1.0, rhs.cwiseAbs().maxCoeff());
  r.flux_drift = defect;
  if (r.det_a1 < 2.0 - 1e-6) throw NumericalError("solve_transmission: |det A1| below 2");
  if (!(r.residual <= 1e-10)) throw NumericalError("solve_transmission: linear solve residual above tolerance");
  return r;
}

inline TransmissionResult transmission(const DielectricProfile& p, const ScalingConfig& cfg, double lambda, cd i1, cd i2,
                                       BerremanOptions o = {}) {
  o.store = false;
  const auto fs = fundamental_solution(p, cfg, lambda, o);
  auto r = solve_transmission(fs.phi1, i1, i2, o.flux_tol);
  r.lambda = lambda;
  return r;
}

struct Stokes {
  double s0, s1;
  cd s2;
};

inline Stokes stokes(cd t1, cd t2) {
  return {std::norm(t1) + std::norm(t2), std::norm(t1) - std::norm(t2), 2.0 * t1 * std::conj(t2)};
}

inline cd flux_pairing(const Vec4& z1, const Vec4& z2) { return (z1.adjoint() * flip_matrix() * z2)(0, 0); }

}  // namespace lcpol
