#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "lcpol/berreman.hpp"
#include "lcpol/extraction.hpp"
#include "lcpol/io.hpp"
#include "lcpol/problem_b.hpp"
#include "lcpol/rng.hpp"
#include "lcpol/scalar2x2.hpp"
#include "lcpol/suites.hpp"
#include "lcpol/uniaxial.hpp"
#include "lcpol/wkb.hpp"

namespace {

using namespace lcpol;
using io::fmt;
using io::Table;

constexpr const char* kVersion = "1.0.0";

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int n = 0;
  if (EVP_Digest(data.data(), data.size(), md, &n, EVP_sha256(), nullptr) != 1) throw NumericalError("sha256 failed");
  std::string s;
  char b[3];
  for (unsigned i = 0; i < n; ++i) {
    std::snprintf(b, sizeof b, "%02x", md[i]);
    s += b;
  }
  return s;
}

struct Options {
  std::string config, profile, out = "out", data, method, mode = "scalar-a", incidence = "1,0";
  std::optional<std::uint64_t> seed;
  std::optional<double> lmin, lmax, lstep, dc;
  bool noisy = false, berreman = false;
  double window = 200.0, lambda_c = 0.99;
  std::vector<std::string> argv;
};

// Output files of one command, written atomically then listed in the manifest.
class Outputs {
 public:
  explicit Outputs(std::string dir) : dir_(std::move(dir)) {}
  void add(const std::string& name, std::string content) { files_[name] = std::move(content); }
  void add(const std::string& name, const Table& t) { add(name, io::to_csv(t)); }
  void commit(const std::string& command, const Options& o, const io::RunConfig* cfg, const io::ProfileFile* prof,
              std::uint64_t seed) {
    nlohmann::json m;
    m["command"] = command;
    m["arguments"] = o.argv;
    m["version"] = kVersion;
    m["seed"] = seed;
    m["config"] = cfg ? cfg->text : "";
    m["profile"] = prof ? prof->text : "";
    if (cfg) {
      m["scaling"] = {{"eta", fmt(cfg->scaling.eta)},
                      {"alpha", fmt(cfg->scaling.alpha)},
                      {"tau", fmt(cfg->scaling.tau)},
                      {"n0", fmt(cfg->scaling.n0)},
                      {"lambda_points", cfg->scaling.lambda_grid.size()}};
    }
    for (const auto& [name, content] : files_) {
      io::write_atomic((std::filesystem::path(dir_) / name).string(), content);
      m["outputs"][name] = sha256_hex(content);
    }
    io::write_atomic((std::filesystem::path(dir_) / "manifest.json").string(), m.dump(2) + "\n");
    for (const auto& [name, content] : files_) std::cout << (std::filesystem::path(dir_) / name).string() << "\n";
  }

 private:
  std::string dir_;
  std::map<std::string, std::string> files_;
};

io::RunConfig load_run_config(const Options& o) {
  if (o.config.empty()) throw PreconditionError("--config is required");
  auto c = io::load_config(o.config);
  if (o.seed) c.scaling.rng_seed = *o.seed;
  if (o.lmin || o.lmax || o.lstep) {
    const double lo = o.lmin.value_or(c.scaling.lambda_grid.front()), hi = o.lmax.value_or(c.scaling.lambda_grid.back());
    const double st = o.lstep.value_or((hi - lo) / std::max<size_t>(1, c.scaling.lambda_grid.size() - 1));
    c.scaling.lambda_grid = stepped_grid(lo, hi, st);
    c.scaling.validate();
  }
  return c;
}

io::ProfileFile load_profile_file(const Options& o, const std::string& kind) {
  if (o.profile.empty()) throw PreconditionError("--profile is required");
  auto p = io::load_profile(o.profile);
  if (!kind.empty() && p.kind != kind) throw PreconditionError(o.profile + ": expected kind = " + kind + ", found " + p.kind);
  return p;
}

std::vector<std::pair<std::string, std::string>> scale_meta(const ScalingConfig& s) {
  return {{"eta", fmt(s.eta)}, {"alpha", fmt(s.alpha)}, {"tau", fmt(s.tau)}};
}

ScalarOptions scalar_options(const io::RunConfig& c) {
  ScalarOptions s;
  s.c_step = c.c_step;
  s.richardson = c.richardson;
  return s;
}

BerremanOptions berreman_options(const io::RunConfig& c) {
  BerremanOptions b;
  b.c_step = c.c_step;
  b.richardson = c.richardson;
  b.store = false;
  return b;
}

std::string moments_text(const std::vector<double>& m) {
  std::ostringstream s;
  s << "# lcpol-moments v1\n" << "count = " << m.size() << "\n";
  for (size_t n = 0; n < m.size(); ++n) s << "m" << n << " = " << fmt(m[n]) << "\n";
  return s.str();
}

void synth_scalar(const Options& o, const io::RunConfig& c, const io::ProfileFile& p, Outputs& out) {
  const auto& q = p.q();
  const auto& s = c.scaling;
  auto meta = scale_meta(s);
  const auto a = data_a(q, s, o.noisy, scalar_options(c));
  out.add("D_A.csv", io::curve_table(a.d_a, meta));
  out.add("D_A_prime.csv", io::curve_table(a.d_a_prime, meta));
  const auto b = forward_db(q, s);
  MeasurementCurve db{"D_B", b.lambda, b.value, std::vector<double>(b.lambda.size(), 0.0), false};
  out.add("D_B.csv", io::curve_table(db, meta));
  const auto ts = fourier_grid(o.window);
  const auto dp = db_prime_direct(q, ts);
  Table t;
  t.meta = {{"quantity", "D_B_prime"}, {"window", fmt(o.window)}};
  t.columns = {"t", "re", "im"};
  for (size_t i = 0; i < ts.size(); ++i) t.rows.push_back({ts[i], dp[i].real(), dp[i].imag()});
  out.add("D_B_prime.csv", t);
  const int N = std::max(120, moments_needed(s.eta_alpha(), std::sqrt(s.tau * s.eta_alpha()), 10.0));
  out.add("moments.txt", moments_text(moments(q, N)));
}

std::pair<cd, cd> parse_incidence(const std::string& s) {
  const auto v = io::parse_numbers(s, "--incidence");
  if (v.size() != 2) throw PreconditionError("--incidence expects two numbers 'a,b'");
  const double n = std::hypot(v[0], v[1]);
  if (!(n > 0.0)) throw PreconditionError("--incidence must be nonzero");
  return {v[0] / n, v[1] / n};
}

void synth_orthorhombic(const Options& o, const io::RunConfig& c, const io::ProfileFile& p, Outputs& out) {
  const auto prof = p.dielectric();
  const auto& s = c.scaling;
  const auto [i1, i2] = parse_incidence(o.incidence);
  const auto bo = berreman_options(c);
  Table t;
  t.meta = scale_meta(s);
  t.meta.insert(t.meta.begin(), {{"quantity", "orthorhombic_T"}, {"noisy", o.noisy ? "1" : "0"}});
  t.columns = {"lambda", "T1_re", "T1_im", "T2_re", "T2_im", "R1_re", "R1_im", "R2_re", "R2_im", "abs_T1", "abs_T2",
               "sigma", "s0", "s1", "s2_re", "s2_im", "det_a1", "flux_drift"};
  for (size_t i = 0; i < s.lambda_grid.size(); ++i) {
    const double l = s.lambda_grid[i];
    const auto r = transmission(prof, s, l, i1, i2, bo);
    double a1 = std::abs(r.T1), a2 = std::abs(r.T2);
    const double sig = s.noise_sigma(l);
    cd t1 = r.T1, t2 = r.T2;
    if (o.noisy) {
      const double n1 = a1 + sig * normal_draw(s.rng_seed, 2 * i), n2 = a2 + sig * normal_draw(s.rng_seed, 2 * i + 1);
      if (a1 > 0.0) t1 *= n1 / a1;
      if (a2 > 0.0) t2 *= n2 / a2;
      a1 = n1;
      a2 = n2;
    }
    const auto st = stokes(t1, t2);
    t.rows.push_back({l, r.T1.real(), r.T1.imag(), r.T2.real(), r.T2.imag(), r.R1.real(), r.R1.imag(), r.R2.real(),
                      r.R2.imag(), a1, a2, o.noisy ? sig : 0.0, st.s0, st.s1, st.s2.real(), st.s2.imag(), r.det_a1,
                      r.flux_drift});
  }
  out.add("orthorhombic_T.csv", t);
}

void synth_uniaxial(const Options& o, const io::RunConfig& c, const io::ProfileFile& p, Outputs& out) {
  const auto& tilt = p.at("tilt");
  const auto& s = c.scaling;
  const double delta = p.delta();
  const auto d = uniaxial_data(tilt, delta, s.eta, s.lambda_grid, scalar_options(c));
  MeasurementCurve m{"abs_T", {}, {}, {}, o.noisy};
  for (size_t i = 0; i < d.lambda.size(); ++i) {
    const double sig = s.noise_sigma(d.lambda[i]);
    m.lambda.push_back(d.lambda[i]);
    m.value.push_back(std::abs(d.T[i]) + (o.noisy ? sig * normal_draw(s.rng_seed, i) : 0.0));
    m.sigma.push_back(o.noisy ? sig : 0.0);
  }
  out.add("abs_T.csv", io::curve_table(m, scale_meta(s)));
  Table ph;
  ph.meta = scale_meta(s);
  ph.meta.insert(ph.meta.begin(), {{"quantity", "uniaxial_phase"}, {"K", fmt(d.K)}, {"delta", fmt(delta)}});
  ph.columns = {"lambda", "T_re", "T_im", "F_re", "F_im", "TF_re", "TF_im", "ToverF_re", "ToverF_im"};
  for (size_t i = 0; i < d.lambda.size(); ++i)
    ph.rows.push_back({d.lambda[i], d.T[i].real(), d.T[i].imag(), d.F[i].real(), d.F[i].imag(), d.TF[i].real(),
                       d.TF[i].imag(), d.T_over_F[i].real(), d.T_over_F[i].imag()});
  out.add("uniaxial_phase.csv", ph);
  if (o.berreman) {
    if (p.at("azimuth").sup_abs() != 0.0) throw PreconditionError("--berreman cross-check needs azimuth = 0");
    Table b;
    b.meta = {{"quantity", "berreman_T1"}, {"delta", fmt(delta)}, {"eta", fmt(s.eta)}};
    b.columns = {"lambda", "T1p_re", "T1p_im", "T1m_re", "T1m_im", "abs_TF"};
    auto bo = berreman_options(c);
    const double n0 = uniaxial_delta(p.eps_perp, p.eps_par).n0;
    for (size_t i = 0; i < d.lambda.size(); ++i) {
      const double l = d.lambda[i];
      const cd tp = uniaxial_berreman_T1(tilt, delta, s.eta, l, 1, bo, n0), tm = uniaxial_berreman_T1(tilt, delta, s.eta, l, -1, bo, n0);
      b.rows.push_back({l, tp.real(), tp.imag(), tm.real(), tm.imag(), std::abs(d.TF[i])});
    }
    out.add("berreman_T1.csv", b);
  }
}

int cmd_synth(const Options& o) {
  const auto c = load_run_config(o);
  Outputs out(o.out);
  if (o.mode == "scalar-a") {
    const auto p = load_profile_file(o, "scalar");
    synth_scalar(o, c, p, out);
    out.commit("synth", o, &c, &p, c.scaling.rng_seed);
  } else if (o.mode == "orthorhombic") {
    const auto p = load_profile_file(o, "orthorhombic");
    synth_orthorhombic(o, c, p, out);
    out.commit("synth", o, &c, &p, c.scaling.rng_seed);
  } else if (o.mode == "uniaxial") {
    const auto p = load_profile_file(o, "uniaxial");
    synth_uniaxial(o, c, p, out);
    out.commit("synth", o, &c, &p, c.scaling.rng_seed);
  } else {
    throw PreconditionError("--mode must be scalar-a, orthorhombic or uniaxial");
  }
  return 0;
}

Table require_columns(const std::string& path, const std::vector<std::string>& cols) {
  if (path.empty()) throw PreconditionError("--data is required");
  auto t = io::read_csv(path);
  for (const auto& c : cols)
    if (!t.has_column(c)) throw PreconditionError(path + ": schema mismatch, missing column '" + c + "'");
  return t;
}

int invert_moments(const Options& o, Outputs& out, const io::RunConfig& c) {
  const auto t = require_columns(o.data, {"lambda", "value"});
  auto curve = io::curve_from_table(t);
  if (curve.quantity == "D_A") {
    for (auto& v : curve.value) v = 4.0 / (v * v) - 2.0;
  } else if (curve.quantity != "D_A_prime") {
    throw PreconditionError(o.data + ": schema mismatch, expected quantity D_A or D_A_prime");
  }
  const auto m = extract_moments(curve, c.scaling);
  std::ostringstream r;
  r << "# lcpol-report v1\nmethod = moments\npoints = " << m.points << "\nphase_identified = " << m.phase_identified << "\n";
  for (int k = 0; k < 5; ++k) r << "A" << k + 1 << " = " << fmt(m.A[k]) << "\nA" << k + 1 << "_err = " << fmt(m.err[k]) << "\n";
  r << "residual_rms = " << fmt(m.residual_rms) << "\nnoise_budget = " << fmt(m.noise_budget) << "\nphi1 = " << fmt(m.phi1) << "\n";
  try {
    const auto e = endpoint_values(m);
    r << "q0 = " << fmt(e.a) << "\nq1 = " << fmt(e.b) << "\n";
  } catch (const PreconditionError& e) {
    r << "endpoints = unavailable (" << e.what() << ")\n";
  }
  Table tb;
  tb.meta = {{"quantity", "moments_estimate"}};
  tb.columns = {"k", "A", "err"};
  for (int k = 0; k < 5; ++k) tb.rows.push_back({double(k + 1), m.A[k], m.err[k]});
  out.add("moments_report.txt", r.str());
  out.add("moments_report.csv", tb);
  std::cout << r.str();
  return 0;
}

int invert_problem_b(const Options& o, Outputs& out) {
  const auto t = require_columns(o.data, {"t", "re", "im"});
  const auto ts = t.column("t"), re = t.column("re"), im = t.column("im");
  std::vector<cd> d(ts.size());
  for (size_t i = 0; i < ts.size(); ++i) d[i] = {re[i], im[i]};
  const auto r = reconstruct_monotone(ts, d);
  Table p;
  p.meta = {{"quantity", "q_monotone"}, {"window", fmt(r.T)}};
  p.columns = {"t", "q"};
  const int n = 1001;
  for (int i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / (n - 1);
    p.rows.push_back({s, r.qhat(s)});
  }
  Table dens;
  dens.meta = {{"quantity", "level_density"}};
  dens.columns = {"y", "rho"};
  for (size_t i = 0; i < r.y.size(); ++i) dens.rows.push_back({r.y[i], r.rho[i]});
  std::ostringstream rep;
  rep << "# lcpol-report v1\nmethod = problem-b\nwindow = " << fmt(r.T) << "\nq0 = " << fmt(r.q0) << "\nq1 = " << fmt(r.q1)
      << "\nmass = " << fmt(r.mass) << "\nmin_density = " << fmt(r.min_rho) << "\nmax_density = " << fmt(r.max_rho)
      << "\ntail = " << fmt(r.tail) << "\nself_consistency = " << fmt(r.self_consistency) << "\n";
  out.add("q_monotone.csv", p);
  out.add("level_density.csv", dens);
  out.add("problem_b_report.txt", rep.str());
  std::cout << rep.str();
  return 0;
}

int invert_problem_c(const Options& o, Outputs& out, const io::RunConfig& c) {
  const auto prof = load_profile_file(o, "uniaxial");
  const double delta = prof.delta();
  const auto& tilt = prof.at("tilt");
  double dc = 0.0, lam = 0.0;
  if (o.dc) {
    dc = *o.dc;
  } else {
    const auto t = require_columns(o.data, {"lambda", "T1p_re", "T1p_im", "T1m_re", "T1m_im"});
    const auto l = t.column("lambda");
    size_t best = l.size();
    for (size_t i = 0; i < l.size(); ++i)
      if (l[i] < 1.0 - 1e-9 && (best == l.size() || std::abs(l[i] - o.lambda_c) < std::abs(l[best] - o.lambda_c))) best = i;
    if (best == l.size()) throw PreconditionError(o.data + ": no sample with lambda < 1");
    lam = l[best];
    const cd tp{t.column("T1p_re")[best], t.column("T1p_im")[best]}, tm{t.column("T1m_re")[best], t.column("T1m_im")[best]};
    dc = d_c_from_phase(tp, tm, delta, c.scaling.eta, lam);
  }
  const int n = 4097;
  std::vector<double> ap(n);
  for (int i = 0; i < n; ++i) ap[i] = std::abs(2.0 * tilt(static_cast<double>(i) / (n - 1)));
  const auto r = problem_c_solve(ScalarProfile::sampled(ap, 1), delta, dc);
  std::ostringstream rep;
  rep << "# lcpol-report v1\nmethod = problem-c\ndelta = " << fmt(delta) << "\nD_C = " << fmt(dc) << "\n";
  if (!o.dc) rep << "lambda = " << fmt(lam) << "\n";
  rep << "G1 = " << fmt(r.G1) << "\ns0 = " << fmt(r.s0) << "\ns0_band = " << fmt(r.band0) << "\ns1 = " << fmt(r.s1)
      << "\ns1_band = " << fmt(r.band1) << "\n";
  out.add("problem_c_report.txt", rep.str());
  std::cout << rep.str();
  return 0;
}

int cmd_invert(const Options& o) {
  const auto c = load_run_config(o);
  Outputs out(o.out);
  int rc;
  if (o.method == "moments") rc = invert_moments(o, out, c);
  else if (o.method == "problem-b") rc = invert_problem_b(o, out);
  else if (o.method == "problem-c") rc = invert_problem_c(o, out, c);
  else throw PreconditionError("--method must be moments, problem-b or problem-c");
  std::optional<io::ProfileFile> p;
  if (!o.profile.empty()) p = io::load_profile(o.profile);
  out.commit("invert", o, &c, p ? &*p : nullptr, c.scaling.rng_seed);
  return rc;
}

int cmd_check(const std::string& suite, std::uint64_t seed) {
  std::vector<CheckRow> rows;
  if (suite == "invariants") rows = invariants_suite(seed);
  else if (suite == "convergence") rows = convergence_suite();
  else if (suite == "nonuniqueness") rows = nonuniqueness_suite();
  else throw PreconditionError("suite must be invariants, convergence or nonuniqueness");
  for (const auto& r : rows)
    std::printf("%-4s %-52s %-24s %s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), fmt(r.value).c_str(), r.relation.c_str(),
                fmt(r.bound).c_str());
  return 0;
}

int cmd_wkb_compare(const Options& o) {
  const auto c = load_run_config(o);
  const auto p = load_profile_file(o, "scalar");
  const auto& s = c.scaling;
  Table t;
  t.meta = scale_meta(s);
  t.meta.insert(t.meta.begin(), {"quantity", "wkb_compare"});
  t.columns = {"lambda", "T_re", "T_im", "Twkb_re", "Twkb_im", "abs_err_T", "D_A_prime", "D_A_prime_wkb", "budget"};
  for (double l : s.lambda_grid) {
    const auto a = problem_a_solve(p.q(), l, s.eta, s.alpha, scalar_options(c));
    const auto w = wkb_endpoint_solution(wkb_coefficients(p.q(), l, s.eta, s.alpha));
    t.rows.push_back({l, a.t.real(), a.t.imag(), w.T.real(), w.T.imag(), std::abs(a.t - w.T), 4.0 / std::norm(a.t) - 2.0,
                      w.d_prime, s.noise_sigma(l)});
  }
  Outputs out(o.out);
  out.add("wkb_compare.csv", t);
  out.commit("wkb-compare", o, &c, &p, s.rng_seed);
  return 0;
}

void common_flags(CLI::App* a, Options& o) {
  a->add_option("--config", o.config, "run configuration (INI)");
  a->add_option("--profile", o.profile, "profile file (INI)");
  a->add_option("--out", o.out, "output directory");
  a->add_option("--seed", o.seed, "noise seed (overrides [noise] seed)");
  a->add_option("--lambda-min", o.lmin, "grid start");
  a->add_option("--lambda-max", o.lmax, "grid end");
  a->add_option("--lambda-step", o.lstep, "grid step");
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  for (int i = 0; i < argc; ++i) o.argv.emplace_back(i == 0 ? "lcpol" : argv[i]);
  CLI::App app{"Polarimetric inverse problems for thin liquid-crystal cells"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* synth = app.add_subcommand("synth", "synthesize datasets");
  common_flags(synth, o);
  synth->add_option("--mode", o.mode, "scalar-a | orthorhombic | uniaxial");
  synth->add_flag("--noisy", o.noisy, "add Gaussian noise of size eta^(5+alpha)/lambda^5");
  synth->add_flag("--berreman", o.berreman, "uniaxial: also write the 4x4 T1(+theta), T1(-theta) file");
  synth->add_option("--incidence", o.incidence, "orthorhombic incident polarization 'a,b'");
  synth->add_option("--window", o.window, "scalar-a: Fourier window T for D_B'");

  auto* invert = app.add_subcommand("invert", "run an inversion on a dataset");
  common_flags(invert, o);
  invert->add_option("--method", o.method, "moments | problem-b | problem-c")->required();
  invert->add_option("--data", o.data, "dataset CSV");
  invert->add_option("--dc", o.dc, "problem-c: D_C value instead of phase data");
  invert->add_option("--lambda-c", o.lambda_c, "problem-c: wavelength used for the phase");

  std::string suite;
  auto* check = app.add_subcommand("check", "run an invariant suite");
  check->add_option("suite", suite, "invariants | convergence | nonuniqueness")->required();
  check->add_option("--seed", o.seed, "seed for random draws");

  auto* wkb = app.add_subcommand("wkb-compare", "direct vs WKB transmission table");
  common_flags(wkb, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    if (*synth) return cmd_synth(o);
    if (*invert) return cmd_invert(o);
    if (*check) return cmd_check(suite, o.seed.value_or(7));
    if (*wkb) return cmd_wkb_compare(o);
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
