#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "lcpol/berreman.hpp"
#include "lcpol/io.hpp"
#include "lcpol/problem_b.hpp"
#include "lcpol/scalar2x2.hpp"
#include "lcpol/uniaxial.hpp"
#include "lcpol/wkb.hpp"

namespace lcpol {

// Portable uniform draws (std distributions are implementation-defined).
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : g_(splitmix64(seed)) {}
  double uniform(double lo = 0.0, double hi = 1.0) { return lo + (hi - lo) * ((g_() >> 11) * 0x1.0p-53); }
  int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1) * (1 - 1e-12)); }

 private:
  std::mt19937_64 g_;
};

// Smooth random coefficient with sup|q| <= bound: a0 + sum_k a_k sin(k pi t + phi_k), rescaled.
inline ScalarProfile random_smooth(Draw& d, double bound = 0.9, int modes = 3) {
  std::vector<double> a(modes + 1), ph(modes + 1);
  for (int k = 0; k <= modes; ++k) {
    a[k] = d.uniform(-1.0, 1.0) / (1 + k);
    ph[k] = d.uniform(0.0, 2.0 * std::numbers::pi);
  }
  auto f = [=](double t) {
    double s = a[0];
    for (int k = 1; k <= modes; ++k) s += a[k] * std::sin(k * std::numbers::pi * t + ph[k]);
    return s;
  };
  double m = 0.0;
  for (int i = 0; i <= 400; ++i) m = std::max(m, std::abs(f(i / 400.0)));
  const double s = d.uniform(0.2, 1.0) * bound / std::max(m, 1e-12);
  return ScalarProfile::from_function([=](double t) { return s * f(t); }, 8, 11);
}

inline DielectricProfile random_orthorhombic(Draw& d, double n0 = 1.52) {
  const double n2 = n0 * n0;
  auto comp = [&] {
    const auto q = random_smooth(d, 1.0, 2);
    const double lvl = d.uniform(0.8, 1.25), amp = d.uniform(0.0, 0.15);
    return ScalarProfile::from_function([=](double t) { return n2 * (lvl + amp * q(t)); }, 8, 11);
  };
  auto e11 = comp();
  auto e22 = comp();
  auto e33 = comp();
  return DielectricProfile::orthorhombic(e11, e22, e33);
}

inline DielectricProfile random_uniaxial(Draw& d, double n0 = 1.52) {
  const auto a = random_smooth(d, 1.0, 2), b = random_smooth(d, 1.0, 2);
  const double c = d.uniform(-0.6, 0.6), phi0 = d.uniform(0.3, 2.5);
  auto tilt = ScalarProfile::from_function([=](double t) { return c + 0.8 * a(t); }, 8, 11);
  auto az = ScalarProfile::from_function([=](double t) { return phi0 + 0.25 * b(t); }, 8, 11);
  const auto [ep, ea] = permittivities_from_delta(d.uniform(-0.1, 0.1), n0);
  return DielectricProfile::uniaxial(tilt, az, ep, ea);
}

// Largest |t|^2 + |r|^2 - 1 over random admissible (q, lambda).
inline double energy_defect(int draws, std::uint64_t seed, double eta = 0.084, double alpha = 0.94) {
  Draw d(seed);
  double m = 0.0;
  for (int i = 0; i < draws; ++i) {
    const auto q = random_smooth(d);
    const double lmin = std::sqrt(1.2 * std::pow(eta, alpha));
    const auto s = problem_a_solve(q, d.uniform(lmin, 1.0), eta, alpha);
    m = std::max(m, std::abs(std::norm(s.t) + std::norm(s.r) - 1.0));
  }
  return m;
}

struct FlipWitness {
  double scalar = 0.0, berreman = 0.0;
};

// max |T(q) - T(q(1-.))|: Problem A and the 4x4 orthorhombic solve.
inline FlipWitness flip_witness(const ScalarProfile& q, const DielectricProfile& ortho, const std::vector<double>& lambdas,
                                double eta, double alpha, const ScalingConfig& cfg) {
  FlipWitness w;
  ScalarOptions so;
  so.richardson = true;
  const auto fq = flip_profile(q);
  BerremanOptions bo;
  bo.richardson = true;
  const auto fo = DielectricProfile::orthorhombic(flip_profile(ortho.component(0)), flip_profile(ortho.component(1)),
                                                  flip_profile(ortho.component(2)));
  for (double l : lambdas) {
    w.scalar = std::max(w.scalar, std::abs(problem_a_transmission(q, l, eta, alpha, so) - problem_a_transmission(fq, l, eta, alpha, so)));
    const auto a = transmission(ortho, cfg, l, 1.0, 0.5, bo), b = transmission(fo, cfg, l, 1.0, 0.5, bo);
    w.berreman = std::max({w.berreman, std::abs(a.T1 - b.T1), std::abs(a.T2 - b.T2)});
  }
  return w;
}

struct BubbleWitness {
  double ratio = 0.0;    // max |D'(q_s1) - D'(q_s2)| / (K eta^(5+alpha)/lambda^5)
  double raw = 0.0;      // same with K = 1
  double K = 0.0;        // WKB error constant of the family: max |D'_direct - D'_wkb| / (eta^(5+alpha)/lambda^5)
  double control = 0.0;  // amplitude change instead of a translation, K = 1
};

// Bubble rearrangements: positive plateau with a bump translated inside it.
inline BubbleWitness bubble_witness(double eta, double alpha, int points = 51) {
  const auto q0 = plateau_profile(0.1, 0.9, 0.3, 0.1, -0.1);
  const double amp = 0.02, hw = 0.15;
  const auto qa = bubble_profile(q0, 0.1, 0.9, amp, hw, 0.3), qb = bubble_profile(q0, 0.1, 0.9, amp, hw, 0.6);
  const auto qc = bubble_profile(q0, 0.1, 0.9, 1.5 * amp, hw, 0.3);
  ScalarOptions o;
  o.richardson = true;
  auto dprime = [&](const ScalarProfile& q, double l) { return 4.0 / std::norm(problem_a_transmission(q, l, eta, alpha, o)) - 2.0; };
  std::vector<double> d, ctl, errw;
  std::vector<double> lam;
  BubbleWitness w;
  for (int i = 0; i < points; ++i) {
    const double l = 0.5 + 0.5 * i / (points - 1), bud = std::pow(eta, 5.0 + alpha) / std::pow(l, 5.0);
    const double a = dprime(qa, l);
    const double wa = wkb_endpoint_solution(wkb_coefficients(qa, l, eta, alpha)).d_prime;
    const double wb_ = wkb_endpoint_solution(wkb_coefficients(qb, l, eta, alpha)).d_prime;
    const double b = dprime(qb, l);
    w.K = std::max({w.K, std::abs(a - wa) / bud, std::abs(b - wb_) / bud});
    lam.push_back(l);
    d.push_back(std::abs(a - b) / bud);
    ctl.push_back(std::abs(a - dprime(qc, l)) / bud);
  }
  for (size_t i = 0; i < d.size(); ++i) {
    w.raw = std::max(w.raw, d[i]);
    w.ratio = std::max(w.ratio, d[i] / w.K);
    w.control = std::max(w.control, ctl[i]);
  }
  return w;
}

struct SignFlipWitness {
  double reduced = 0.0, berreman = 0.0, dK = 0.0, K = 0.0;
};

inline SignFlipWitness sign_flip_witness(double delta, double eta, const std::vector<double>& lambdas) {
  const auto base = io::pattern_base(0.6, 0.04);
  const auto pa = pattern_flip_family(base, 5, {1, -1, 1, -1, 1}), pb = pattern_flip_family(base, 5, {1, 1, 1, 1, 1});
  const auto ua = reduce(pa, delta, eta), ub = reduce(pb, delta, eta);
  SignFlipWitness w;
  w.dK = std::abs(ua.K - ub.K);
  w.K = ua.K;
  BerremanOptions bo;
  bo.richardson = true;
  for (double l : lambdas) {
    w.reduced = std::max(w.reduced, std::abs(std::abs(reduced_transmission(ua, l)) - std::abs(reduced_transmission(ub, l))));
    w.berreman = std::max(w.berreman, std::abs(std::abs(uniaxial_berreman_T1(pa, delta, eta, l, 1, bo)) -
                                               std::abs(uniaxial_berreman_T1(pb, delta, eta, l, 1, bo))));
  }
  return w;
}

// Max over lambda of |T_direct - T_wkb| (complex), and of |D'_direct - D'_wkb|, scaled by lambda^5.
struct WkbError {
  double T = 0.0, d_prime = 0.0;
};

inline WkbError wkb_error(const ScalarProfile& q, double eta, double alpha, int points = 41) {
  ScalarOptions o;
  o.richardson = true;
  WkbError e;
  for (int i = 0; i < points; ++i) {
    const double l = 0.5 + 0.5 * i / (points - 1);
    const auto s = problem_a_solve(q, l, eta, alpha, o);
    const auto w = wkb_endpoint_solution(wkb_coefficients(q, l, eta, alpha));
    const double l5 = std::pow(l, 5.0);
    e.T = std::max(e.T, std::abs(s.t - w.T) * l5);
    e.d_prime = std::max(e.d_prime, std::abs(4.0 / std::norm(s.t) - 2.0 - w.d_prime) * l5);
  }
  return e;
}

struct CheckRow {
  std::string name;
  double value, bound;
  bool pass;
  std::string relation;  // "<=" or ">=" or "in"
};

inline CheckRow row_le(std::string n, double v, double b) { return {std::move(n), v, b, v <= b, "<="}; }
inline CheckRow row_ge(std::string n, double v, double b) { return {std::move(n), v, b, v >= b, ">="}; }

inline std::vector<CheckRow> invariants_suite(std::uint64_t seed = 7) {
  std::vector<CheckRow> rows;
  rows.push_back(row_le("|t|^2+|r|^2 = 1 (20 draws)", energy_defect(20, seed), 1e-9));
  Draw d(seed);
  ScalingConfig cfg;
  double det = INFINITY, drift = 0.0;
  for (int i = 0; i < 4; ++i) {
    const auto p = (i % 2) ? random_uniaxial(d) : random_orthorhombic(d);
    for (double l : {cfg.lambda_min() * 1.0001, 0.6, 1.0}) {
      const auto r = transmission(p, cfg, l, 1.0, 0.0);
      det = std::min(det, r.det_a1);
    }
    const auto fs = fundamental_solution(p, cfg, 0.7);
    drift = std::max(drift, fs.flux_drift);
  }
  rows.push_back(row_ge("|det A1| >= 2", det, 2.0 - 1e-6));
  rows.push_back(row_le("flux drift <= 1e-8", drift, 1e-8));
  double fmod = 0.0;
  for (double l : {0.3, 0.7, 1.0}) fmod = std::max(fmod, std::abs(std::abs(phase_factor(random_smooth(d), 0.05, 0.084, l)) - 1.0));
  rows.push_back(row_le("|F| = 1", fmod, 1e-14));
  // Level-set invariance of D_B on a random piecewise-constant profile.
  std::vector<double> br{0.0};
  std::vector<poly::Coeffs> cs;
  for (int k = 1; k <= 7; ++k) {
    br.push_back(k == 7 ? 1.0 : br.back() + d.uniform(0.05, 0.2));
    cs.push_back({d.uniform(-0.9, 0.9)});
  }
  const auto pc = ScalarProfile::piecewise(br, cs);
  cfg.lambda_grid = uniform_grid(cfg.lambda_min(), 1.0, 20);
  const auto a = forward_db(pc, cfg), b = forward_db(rearrange_monotone(pc), cfg);
  double lv = 0.0;
  for (size_t i = 0; i < a.value.size(); ++i) lv = std::max(lv, std::abs(a.value[i] - b.value[i]));
  rows.push_back(row_le("level-set invariance of D_B", lv, 1e-10));
  return rows;
}

inline std::vector<CheckRow> convergence_suite(double alpha = 0.94) {
  std::vector<CheckRow> rows;
  // RK4 order: error ratio of the constant-q slab when c_step doubles.
  const auto q = ScalarProfile::constant(0.4);
  const double eta = 0.084, l = 0.8;
  const auto ex = slab_oracle(0.4, l, eta, alpha).t;
  ScalarOptions a, b;
  a.c_step = 10;
  b.c_step = 20;
  const double ea = std::abs(problem_a_transmission(q, l, eta, alpha, a) - ex);
  const double eb = std::abs(problem_a_transmission(q, l, eta, alpha, b) - ex);
  rows.push_back({"RK4 error ratio (target 16)", ea / eb, 16.0, ea / eb > 12.0 && ea / eb < 20.0, "in"});
  const auto qs = ScalarProfile::from_function([](double t) { return 0.5 * std::sin(std::numbers::pi * t); }, 16, 11);
  const double e1 = wkb_error(qs, 0.084, alpha, 21).T, e2 = wkb_error(qs, 0.042, alpha, 21).T;
  const double target = std::pow(2.0, 5.0 + alpha);
  rows.push_back({"WKB error ratio eta -> eta/2 (target 2^(5+alpha))", e1 / e2, target,
                  e1 / e2 >= target / 4 && e1 / e2 <= 4 * target, "in"});
  return rows;
}

inline std::vector<CheckRow> nonuniqueness_suite(double alpha = 0.94) {
  std::vector<CheckRow> rows;
  Draw d(11);
  ScalingConfig cfg;
  const auto q = random_smooth(d);
  const auto o = random_orthorhombic(d);
  const auto f = flip_witness(q, o, {0.5, 0.8, 1.0}, cfg.eta, alpha, cfg);
  rows.push_back(row_le("flip: |T(q) - T(flip q)| scalar", f.scalar, 1e-9));
  rows.push_back(row_le("flip: |T(q) - T(flip q)| 4x4", f.berreman, 1e-9));
  const auto b = bubble_witness(cfg.eta, alpha, 21);
  rows.push_back(row_le("bubble: |dD'| / (K_wkb eta^(5+alpha)/lambda^5)", b.ratio, 1.0));
  const auto s = sign_flip_witness(-0.0984, cfg.eta, {0.5, 0.8, 1.0});
  rows.push_back(row_le("sign flip: d|T| reduced", s.reduced, 1e-8));
  rows.push_back(row_le("sign flip: d|T| 4x4", s.berreman, 1e-8));
  rows.push_back(row_le("sign flip: |dK|", s.dK, 1e-12));
  return rows;
}

}  // namespace lcpol
