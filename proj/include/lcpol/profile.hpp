#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "lcpol/errors.hpp"

namespace lcpol {

namespace poly {

// Coefficients c[k] multiply x^k.
using Coeffs = std::vector<double>;

inline double eval(const Coeffs& c, double x) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

// Value and the first four derivatives at x.
inline std::array<double, 5> eval_derivs(const Coeffs& c, double x) {
  std::array<double, 5> d{};
  const int n = static_cast<int>(c.size());
  for (int k = n - 1; k >= 0; --k) {
    for (int j = 4; j >= 1; --j) d[j] = d[j] * x + d[j - 1];
    d[0] = d[0] * x + c[k];
  }
  // d[j] holds p^(j)/j!
  d[2] *= 2.0;
  d[3] *= 6.0;
  d[4] *= 24.0;
  return d;
}

inline Coeffs multiply(const Coeffs& a, const Coeffs& b) {
  if (a.empty() || b.empty()) return {};
  Coeffs r(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

// Coefficients of x -> p(a*x + b).
inline Coeffs compose_affine(const Coeffs& c, double a, double b) {
  Coeffs r(c.size(), 0.0);
  Coeffs pw{1.0};
  const Coeffs lin{b, a};
  for (size_t k = 0; k < c.size(); ++k) {
    for (size_t j = 0; j < pw.size(); ++j) r[j] += c[k] * pw[j];
    pw = multiply(pw, lin);
  }
  return r;
}

inline Coeffs add(Coeffs a, const Coeffs& b) {
  if (b.size() > a.size()) a.resize(b.size(), 0.0);
  for (size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

inline Coeffs scale(Coeffs a, double s) {
  for (auto& v : a) v *= s;
  return a;
}

// Chebyshev interpolant of f on [a,b] at first-kind nodes, returned in powers of (t-a).
inline Coeffs chebyshev_fit(const std::function<double(double)>& f, double a, double b, int degree) {
  const int n = degree + 1;
  std::vector<double> fx(n);
  for (int j = 0; j < n; ++j) {
    const double u = std::cos(std::numbers::pi * (j + 0.5) / n);
    fx[j] = f(a + 0.5 * (b - a) * (u + 1.0));
  }
  std::vector<double> ck(n, 0.0);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += fx[j] * std::cos(std::numbers::pi * k * (j + 0.5) / n);
    ck[k] = (k == 0 ? 1.0 : 2.0) * s / n;
  }
  // Chebyshev -> monomials in u
  Coeffs pu(n, 0.0);
  Coeffs tkm1{1.0}, tk{0.0, 1.0};
  pu = add(pu, scale(tkm1, ck[0]));
  if (n > 1) pu = add(pu, scale(tk, ck[1]));
  for (int k = 2; k < n; ++k) {
    Coeffs next = multiply(Coeffs{0.0, 2.0}, tk);
    next = add(next, scale(tkm1, -1.0));
    pu = add(pu, scale(next, ck[k]));
    tkm1 = std::move(tk);
    tk = std::move(next);
  }
  return compose_affine(pu, 2.0 / (b - a), -1.0);
}

}  // namespace poly

// Finite-difference weights (Fornberg) for derivatives 0..m at z on nodes x.
inline std::vector<std::vector<double>> fornberg_weights(double z, const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0, c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

class ScalarProfile {
 public:
  enum class Representation { Sampled, Piecewise };

  ScalarProfile() : ScalarProfile(constant(0.0)) {}

  static ScalarProfile constant(double c) { return piecewise({0.0, 1.0}, {{c}}); }

  // Single polynomial in t on [0,1].
  static ScalarProfile polynomial(poly::Coeffs c) { return piecewise({0.0, 1.0}, {std::move(c)}); }

  // Segment i covers [breaks[i], breaks[i+1]] with powers of (t - breaks[i]).
  static ScalarProfile piecewise(std::vector<double> breaks, std::vector<poly::Coeffs> coeffs) {
    require(breaks.size() >= 2 && coeffs.size() == breaks.size() - 1, "piecewise profile: breakpoint/segment count mismatch");
    require(breaks.front() == 0.0 && breaks.back() == 1.0, "piecewise profile: breakpoints must start at 0 and end at 1");
    for (size_t i = 0; i + 1 < breaks.size(); ++i)
      require(breaks[i + 1] > breaks[i], "piecewise profile: breakpoints must be strictly increasing");
    for (auto& c : coeffs)
      if (c.empty()) c.push_back(0.0);
    ScalarProfile p(Representation::Piecewise);
    p.breaks_ = std::move(breaks);
    p.coeffs_ = std::move(coeffs);
    return p;
  }

  // Uniform samples at t_i = i/(N-1), interpolation order 1 or 3.
  static ScalarProfile sampled(std::vector<double> values, int order = 3) {
    require(values.size() >= 2, "sampled profile: need at least two samples");
    require(order == 1 || order == 3, "sampled profile: interpolation order must be 1 or 3");
    require(order == 1 || values.size() >= 4, "sampled profile: cubic interpolation needs four samples");
    ScalarProfile p(Representation::Sampled);
    p.samples_ = std::move(values);
    p.order_ = order;
    p.breaks_ = {0.0, 1.0};
    return p;
  }

  // Piecewise Chebyshev interpolant of a smooth function; `breaks` marks points where f may be non-smooth.
  static ScalarProfile from_function(const std::function<double(double)>& f, int segments = 16, int degree = 9,
                                     std::vector<double> breaks = {0.0, 1.0}) {
    std::vector<double> bk{0.0};
    std::vector<poly::Coeffs> cs;
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
      const double a = breaks[i], b = breaks[i + 1];
      const int m = std::max(1, static_cast<int>(std::ceil(segments * (b - a) - 1e-9)));
      for (int j = 0; j < m; ++j) {
        const double lo = a + (b - a) * j / m;
        const double hi = (j + 1 == m) ? b : a + (b - a) * (j + 1) / m;
        cs.push_back(poly::chebyshev_fit(f, lo, hi, degree));
        bk.push_back(hi);
      }
    }
    return piecewise(std::move(bk), std::move(cs));
  }

  // Uniform sampled copy of any profile.
  static ScalarProfile sample(const ScalarProfile& p, int n = 2048, int order = 3) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = p(static_cast<double>(i) / (n - 1));
    return sampled(std::move(v), order);
  }

  Representation representation() const { return rep_; }
  bool is_piecewise() const { return rep_ == Representation::Piecewise; }
  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<poly::Coeffs>& coefficients() const { return coeffs_; }
  const std::vector<double>& samples() const { return samples_; }
  int order() const { return order_; }

  bool is_piecewise_constant() const {
    if (!is_piecewise()) return false;
    for (const auto& c : coeffs_)
      for (size_t k = 1; k < c.size(); ++k)
        if (c[k] != 0.0) return false;
    return true;
  }

  double operator()(double t) const {
    check_domain(t);
    if (is_piecewise()) {
      const size_t i = segment_index(t);
      return poly::eval(coeffs_[i], t - breaks_[i]);
    }
    return sampled_value(t);
  }

  // Value and derivatives up to order 4. Sampled profiles use a local 9-node stencil for derivatives.
  std::array<double, 5> derivs(double t) const {
    check_domain(t);
    if (is_piecewise()) {
      const size_t i = segment_index(t);
      return poly::eval_derivs(coeffs_[i], t - breaks_[i]);
    }
    std::array<double, 5> d{};
    d[0] = sampled_value(t);
    const int n = static_cast<int>(samples_.size());
    const int w = std::min(n, 9);
    const double h = 1.0 / (n - 1);
    int lo = static_cast<int>(std::floor(t / h)) - w / 2 + 1;
    lo = std::clamp(lo, 0, n - w);
    std::vector<double> x(w);
    for (int j = 0; j < w; ++j) x[j] = (lo + j) * h;
    const int m = std::min(4, w - 1);
    const auto c = fornberg_weights(t, x, m);
    for (int k = 1; k <= m; ++k) {
      double s = 0.0;
      for (int j = 0; j < w; ++j) s += c[k][j] * samples_[lo + j];
      d[k] = s;
    }
    return d;
  }

  double derivative(double t, int k) const {
    require(k >= 0 && k <= 4, "derivative order must be in 0..4");
    return derivs(t)[k];
  }

  // Dense check points: every sample, or breakpoints plus interior points of each segment.
  std::vector<double> check_points(int per_segment = 64) const {
    std::vector<double> pts;
    if (!is_piecewise()) {
      const int n = static_cast<int>(samples_.size());
      for (int i = 0; i < n; ++i) pts.push_back(static_cast<double>(i) / (n - 1));
      return pts;
    }
    for (size_t i = 0; i + 1 < breaks_.size(); ++i)
      for (int j = 0; j < per_segment; ++j)
        pts.push_back(breaks_[i] + (breaks_[i + 1] - breaks_[i]) * j / per_segment);
    pts.push_back(1.0);
    return pts;
  }

  double sup_abs() const {
    double m = 0.0;
    for (double t : check_points()) m = std::max(m, std::abs((*this)(t)));
    return m;
  }
  double min_value() const {
    double m = INFINITY;
    for (double t : check_points()) m = std::min(m, (*this)(t));
    return m;
  }
  double max_value() const {
    double m = -INFINITY;
    for (double t : check_points()) m = std::max(m, (*this)(t));
    return m;
  }

  // Enforces sup|q| <= 1 (tolerance 1e-12) for Problem A/B coefficients.
  const ScalarProfile& require_unit_bound() const {
    require(sup_abs() <= 1.0 + 1e-12, "coefficient violates sup|q| <= 1");
    return *this;
  }

 private:
  explicit ScalarProfile(Representation r) : rep_(r) {}

  static void check_domain(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw PreconditionError("profile evaluated outside [0,1]: t = " + std::to_string(t));
  }

  size_t segment_index(double t) const {
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    size_t i = static_cast<size_t>(it - breaks_.begin());
    i = (i == 0) ? 0 : i - 1;
    return std::min(i, coeffs_.size() - 1);
  }

  double sampled_value(double t) const {
    const int n = static_cast<int>(samples_.size());
    const double x = t * (n - 1);
    int i = std::min(static_cast<int>(std::floor(x)), n - 2);
    if (order_ == 1) {
      const double f = x - i;
      return samples_[i] * (1.0 - f) + samples_[i + 1] * f;
    }
    int lo = std::clamp(i - 1, 0, n - 4);
    const double u = x - lo;
    double s = 0.0;
    for (int j = 0; j < 4; ++j) {
      double l = 1.0;
      for (int k = 0; k < 4; ++k)
        if (k != j) l *= (u - k) / static_cast<double>(j - k);
      s += l * samples_[lo + j];
    }
    return s;
  }

  Representation rep_;
  std::vector<double> breaks_;
  std::vector<poly::Coeffs> coeffs_;
  std::vector<double> samples_;
  int order_ = 3;
};

// t -> p(1-t)
inline ScalarProfile flip_profile(const ScalarProfile& p) {
  if (!p.is_piecewise()) {
    std::vector<double> v(p.samples().rbegin(), p.samples().rend());
    return ScalarProfile::sampled(std::move(v), p.order());
  }
  const auto& b = p.breakpoints();
  const auto& c = p.coefficients();
  const size_t n = c.size();
  std::vector<double> nb{0.0};
  std::vector<poly::Coeffs> nc;
  for (size_t k = 0; k < n; ++k) {
    const size_t i = n - 1 - k;
    nc.push_back(poly::compose_affine(c[i], -1.0, b[i + 1] - b[i]));
    nb.push_back(k + 1 == n ? 1.0 : 1.0 - b[i]);
  }
  return ScalarProfile::piecewise(std::move(nb), std::move(nc));
}

// Pointwise sum of two piecewise profiles on the union of their breakpoints.
inline ScalarProfile profile_sum(const ScalarProfile& a, const ScalarProfile& b) {
  require(a.is_piecewise() && b.is_piecewise(), "profile_sum needs piecewise-polynomial operands");
  std::vector<double> bk = a.breakpoints();
  bk.insert(bk.end(), b.breakpoints().begin(), b.breakpoints().end());
  std::sort(bk.begin(), bk.end());
  bk.erase(std::unique(bk.begin(), bk.end()), bk.end());
  auto piece = [](const ScalarProfile& p, double lo, double hi) {
    const auto& pb = p.breakpoints();
    const double mid = 0.5 * (lo + hi);
    size_t i = static_cast<size_t>(std::upper_bound(pb.begin(), pb.end(), mid) - pb.begin()) - 1;
    i = std::min(i, p.coefficients().size() - 1);
    return poly::compose_affine(p.coefficients()[i], 1.0, lo - pb[i]);
  };
  std::vector<poly::Coeffs> cs;
  for (size_t i = 0; i + 1 < bk.size(); ++i) cs.push_back(poly::add(piece(a, bk[i], bk[i + 1]), piece(b, bk[i], bk[i + 1])));
  return ScalarProfile::piecewise(std::move(bk), std::move(cs));
}

// amplitude * (1 - u^2)^5 with u = (t - center)/halfwidth, zero outside; C^4 at the support edges.
inline ScalarProfile bump_profile(double center, double halfwidth, double amplitude) {
  require(halfwidth > 0.0, "bump: halfwidth must be positive");
  const double lo = center - halfwidth, hi = center + halfwidth;
  require(lo >= 0.0 && hi <= 1.0, "bump: support must lie inside [0,1]");
  poly::Coeffs base{1.0};
  for (int k = 0; k < 5; ++k) base = poly::multiply(base, {1.0, 0.0, -1.0});
  base = poly::scale(base, amplitude);
  // u = s/halfwidth - 1 with s = t - lo
  poly::Coeffs local = poly::compose_affine(base, 1.0 / halfwidth, -1.0);
  std::vector<double> bk{0.0};
  std::vector<poly::Coeffs> cs;
  if (lo > 0.0) {
    bk.push_back(lo);
    cs.push_back({0.0});
  }
  cs.push_back(local);
  bk.push_back(hi);
  if (hi < 1.0) {
    bk.push_back(1.0);
    cs.push_back({0.0});
  }
  return ScalarProfile::piecewise(std::move(bk), std::move(cs));
}

// A C^4 profile constant (= level) on [t0,t1] with quintic ramps outside.
inline ScalarProfile plateau_profile(double t0, double t1, double level, double left_amp, double right_amp) {
  require(0.0 < t0 && t0 < t1 && t1 < 1.0, "plateau: need 0 < t0 < t1 < 1");
  // left: level + left_amp*((t0-t)/t0)^5 on [0,t0]; in s = t: ((t0 - s)/t0)^5
  poly::Coeffs lp{1.0};
  for (int k = 0; k < 5; ++k) lp = poly::multiply(lp, {1.0, -1.0 / t0});
  lp = poly::add(poly::scale(lp, left_amp), {level});
  poly::Coeffs rp{0.0, 0.0, 0.0, 0.0, 0.0, right_amp / std::pow(1.0 - t1, 5)};
  rp[0] = level;
  return ScalarProfile::piecewise({0.0, t0, t1, 1.0}, {lp, {level}, rp});
}

// Example bubble family member: plateau profile plus a bump centred at `center` inside the plateau.
inline ScalarProfile bubble_profile(const ScalarProfile& q0, double t0, double t1, double amplitude, double halfwidth,
                                    double center) {
  require(center - halfwidth >= t0 - 1e-15 && center + halfwidth <= t1 + 1e-15, "bubble: bump leaves the plateau interval");
  return profile_sum(q0, bump_profile(center, halfwidth, amplitude));
}

// Support [lo, hi] of a piecewise profile (outermost segments with a nonzero coefficient).
inline std::pair<double, double> support_of(const ScalarProfile& p) {
  require(p.is_piecewise(), "support_of needs a piecewise-polynomial profile");
  const auto& c = p.coefficients();
  const auto& b = p.breakpoints();
  auto nonzero = [](const poly::Coeffs& cc) {
    return std::any_of(cc.begin(), cc.end(), [](double v) { return v != 0.0; });
  };
  size_t first = c.size(), last = 0;
  for (size_t i = 0; i < c.size(); ++i)
    if (nonzero(c[i])) {
      first = std::min(first, i);
      last = i;
    }
  require(first < c.size(), "support_of: profile is identically zero");
  return {b[first], b[last + 1]};
}

// Copies of a compactly supported pattern in `slots` equal slots, each multiplied by signs[k].
inline ScalarProfile pattern_flip_family(const ScalarProfile& base, int slots, const std::vector<int>& signs) {
  require(slots >= 1, "pattern_flip_family: slots must be positive");
  require(static_cast<int>(signs.size()) == slots, "pattern_flip_family: need one sign per slot");
  for (int s : signs) require(s == 1 || s == -1, "pattern_flip_family: signs must be +1 or -1");
  const auto [lo, hi] = support_of(base);
  const double width = hi - lo, slot = 1.0 / slots;
  if (width > slot + 1e-15) throw PreconditionError("pattern_flip_family: pattern too wide, slots overlap");
  const auto& b = base.breakpoints();
  const auto& c = base.coefficients();
  std::vector<double> nb{0.0};
  std::vector<poly::Coeffs> nc;
  for (int k = 0; k < slots; ++k) {
    const double shift = k * slot + 0.5 * (slot - width) - lo;
    for (size_t i = 0; i < c.size(); ++i) {
      if (b[i + 1] <= lo || b[i] >= hi) continue;
      const double a0 = b[i] + shift;
      if (a0 > nb.back()) {
        nc.push_back({0.0});
        nb.push_back(a0);
      }
      nc.push_back(poly::scale(c[i], static_cast<double>(signs[k])));
      nb.push_back(std::min(1.0, b[i + 1] + shift));
    }
  }
  if (nb.back() < 1.0) {
    nc.push_back({0.0});
    nb.push_back(1.0);
  } else {
    nb.back() = 1.0;
  }
  return ScalarProfile::piecewise(std::move(nb), std::move(nc));
}

// Non-decreasing rearrangement. Piecewise-constant input is rearranged exactly by sorting segments;
// sampled input by sorting samples; other input is sampled on the default grid first.
inline ScalarProfile rearrange_monotone(const ScalarProfile& q, int n = 2048) {
  if (q.is_piecewise_constant()) {
    const auto& b = q.breakpoints();
    std::vector<std::pair<double, double>> seg;
    for (size_t i = 0; i + 1 < b.size(); ++i) seg.push_back({q.coefficients()[i][0], b[i + 1] - b[i]});
    std::stable_sort(seg.begin(), seg.end(), [](auto& x, auto& y) { return x.first < y.first; });
    std::vector<double> nb{0.0};
    std::vector<poly::Coeffs> nc;
    double acc = 0.0;
    for (size_t i = 0; i < seg.size(); ++i) {
      acc += seg[i].second;
      nb.push_back(i + 1 == seg.size() ? 1.0 : acc);
      nc.push_back({seg[i].first});
    }
    return ScalarProfile::piecewise(std::move(nb), std::move(nc));
  }
  std::vector<double> v;
  if (q.is_piecewise()) {
    v.resize(n);
    for (int i = 0; i < n; ++i) v[i] = q(static_cast<double>(i) / (n - 1));
  } else {
    v = q.samples();
  }
  std::sort(v.begin(), v.end());
  return ScalarProfile::sampled(std::move(v), 1);
}

struct Tensor3 {
  double e11, e22, e33, e12, e13, e23;
};

enum class DielectricKind { Orthorhombic, Uniaxial, General };

class DielectricProfile {
 public:
  static DielectricProfile orthorhombic(ScalarProfile e11, ScalarProfile e22, ScalarProfile e33) {
    DielectricProfile d;
    d.kind_ = DielectricKind::Orthorhombic;
    d.comp_ = {std::move(e11), std::move(e22), std::move(e33)};
    d.check_positive_diagonal();
    return d;
  }

  // Director n = (cos psi cos phi, cos psi sin phi, sin psi); eps = eps_perp I + (eps_par - eps_perp) n n^T.
  static DielectricProfile uniaxial(ScalarProfile tilt, ScalarProfile azimuth, double eps_perp, double eps_par) {
    require(eps_perp > 0.0 && eps_par > 0.0, "uniaxial: permittivities must be positive");
    const double tol = 1e-12;
    for (double t : tilt.check_points())
      require(tilt(t) > -std::numbers::pi / 2 - tol && tilt(t) <= std::numbers::pi / 2 + tol,
              "uniaxial: tilt must lie in (-pi/2, pi/2]");
    for (double t : azimuth.check_points())
      require(azimuth(t) >= -tol && azimuth(t) < std::numbers::pi, "uniaxial: azimuth must lie in [0, pi)");
    DielectricProfile d;
    d.kind_ = DielectricKind::Uniaxial;
    d.comp_ = {std::move(tilt), std::move(azimuth)};
    d.eps_perp_ = eps_perp;
    d.eps_par_ = eps_par;
    return d;
  }

  // Order: e11, e22, e33, e12, e13, e23.
  static DielectricProfile general(std::array<ScalarProfile, 6> c) {
    DielectricProfile d;
    d.kind_ = DielectricKind::General;
    d.comp_.assign(c.begin(), c.end());
    d.check_positive_diagonal();
    return d;
  }

  DielectricKind kind() const { return kind_; }
  const ScalarProfile& component(size_t i) const { return comp_.at(i); }
  size_t components() const { return comp_.size(); }
  double eps_perp() const { return eps_perp_; }
  double eps_par() const { return eps_par_; }

  Tensor3 at(double t) const {
    switch (kind_) {
      case DielectricKind::Orthorhombic:
        return {comp_[0](t), comp_[1](t), comp_[2](t), 0.0, 0.0, 0.0};
      case DielectricKind::Uniaxial: {
        const double psi = comp_[0](t), phi = comp_[1](t);
        const double n1 = std::cos(psi) * std::cos(phi), n2 = std::cos(psi) * std::sin(phi), n3 = std::sin(psi);
        const double d = eps_par_ - eps_perp_;
        return {eps_perp_ + d * n1 * n1, eps_perp_ + d * n2 * n2, eps_perp_ + d * n3 * n3,
                d * n1 * n2,             d * n1 * n3,             d * n2 * n3};
      }
      case DielectricKind::General:
        return {comp_[0](t), comp_[1](t), comp_[2](t), comp_[3](t), comp_[4](t), comp_[5](t)};
    }
    return {};
  }

  // Union of component breakpoints.
  std::vector<double> breakpoints() const {
    std::vector<double> b;
    for (const auto& c : comp_) b.insert(b.end(), c.breakpoints().begin(), c.breakpoints().end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
  }

 private:
  DielectricProfile() = default;

  void check_positive_diagonal() const {
    for (int i = 0; i < 3; ++i)
      require(comp_[i].min_value() > 0.0, "dielectric profile: diagonal entries must be positive");
  }

  DielectricKind kind_ = DielectricKind::Orthorhombic;
  std::vector<ScalarProfile> comp_;
  double eps_perp_ = 0.0, eps_par_ = 0.0;
};

}  // namespace lcpol
