#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "lcpol/errors.hpp"
#include "lcpol/measurement.hpp"
#include "lcpol/profile.hpp"
#include "lcpol/scaling.hpp"

namespace lcpol::io {

constexpr int kCsvVersion = 1;

inline std::string fmt(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

inline std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

// Numbers separated by spaces and/or commas.
inline std::vector<double> parse_numbers(const std::string& s, const std::string& what) {
  std::string t = s;
  for (char& c : t)
    if (c == ',') c = ' ';
  std::istringstream in(t);
  std::vector<double> v;
  std::string tok;
  while (in >> tok) {
    size_t pos = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != tok.size()) throw PreconditionError(what + ": not a number: '" + tok + "'");
    v.push_back(x);
  }
  return v;
}

inline void write_atomic(const std::string& path, const std::string& content) {
  const auto p = std::filesystem::path(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw PreconditionError("cannot write " + tmp);
    out << content;
    out.flush();
    if (!out) throw PreconditionError("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// '#'-prefixed metadata, one header row, numeric rows.
struct Table {
  int version = kCsvVersion;
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string get_meta(const std::string& k, const std::string& def = "") const {
    for (const auto& [a, b] : meta)
      if (a == k) return b;
    return def;
  }
  bool has_column(const std::string& c) const { return std::find(columns.begin(), columns.end(), c) != columns.end(); }
  std::vector<double> column(const std::string& c) const {
    auto it = std::find(columns.begin(), columns.end(), c);
    if (it == columns.end()) throw PreconditionError("table: missing column '" + c + "'");
    const size_t k = static_cast<size_t>(it - columns.begin());
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r[k]);
    return v;
  }
};

inline std::string to_csv(const Table& t) {
  std::ostringstream o;
  o << "# lcpol-csv v" << t.version << "\n";
  for (const auto& [k, v] : t.meta) o << "# " << k << " = " << v << "\n";
  for (size_t i = 0; i < t.columns.size(); ++i) o << (i ? "," : "") << t.columns[i];
  o << "\n";
  for (const auto& r : t.rows) {
    require(r.size() == t.columns.size(), "table: row width differs from header");
    for (size_t i = 0; i < r.size(); ++i) o << (i ? "," : "") << fmt(r[i]);
    o << "\n";
  }
  return o.str();
}

inline Table parse_csv(const std::string& text, const std::string& source = "<csv>") {
  std::istringstream in(text);
  std::string line;
  int ln = 0;
  auto fail = [&](const std::string& m) { throw PreconditionError(source + ":" + std::to_string(ln) + ": " + m); };
  Table t;
  if (!std::getline(in, line)) fail("empty file");
  ++ln;
  line = trim(line);
  const std::string tag = "# lcpol-csv v";
  if (line.rfind(tag, 0) != 0) fail("missing '# lcpol-csv v<N>' header");
  try {
    t.version = std::stoi(line.substr(tag.size()));
  } catch (const std::exception&) {
    fail("bad schema version");
  }
  if (t.version != kCsvVersion) fail("unsupported schema version " + std::to_string(t.version));
  bool header = false;
  while (std::getline(in, line)) {
    ++ln;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) t.meta.push_back({trim(line.substr(1, eq - 1)), trim(line.substr(eq + 1))});
      continue;
    }
    if (!header) {
      t.columns = split(line, ',');
      header = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != t.columns.size()) fail("expected " + std::to_string(t.columns.size()) + " fields");
    std::vector<double> r;
    for (const auto& s : f) {
      try {
        r.push_back(parse_numbers(s, "value").at(0));
      } catch (const std::exception&) {
        fail("bad number '" + s + "'");
      }
    }
    t.rows.push_back(std::move(r));
  }
  if (!header) fail("missing column header");
  return t;
}

inline void write_csv(const std::string& path, const Table& t) { write_atomic(path, to_csv(t)); }
inline Table read_csv(const std::string& path) { return parse_csv(read_file(path), path); }

inline Table curve_table(const MeasurementCurve& c, std::vector<std::pair<std::string, std::string>> meta = {}) {
  Table t;
  t.meta = std::move(meta);
  t.meta.insert(t.meta.begin(), {{"quantity", c.quantity}, {"noisy", c.noisy ? "1" : "0"}});
  t.columns = {"lambda", "value", "sigma"};
  for (size_t i = 0; i < c.lambda.size(); ++i) t.rows.push_back({c.lambda[i], c.value[i], i < c.sigma.size() ? c.sigma[i] : 0.0});
  return t;
}

inline MeasurementCurve curve_from_table(const Table& t, const std::string& value_column = "value") {
  MeasurementCurve c;
  c.quantity = t.get_meta("quantity", value_column);
  c.noisy = t.get_meta("noisy", "0") == "1";
  c.lambda = t.column("lambda");
  c.value = t.column(value_column);
  if (t.has_column("sigma")) c.sigma = t.column("sigma");
  else c.sigma.assign(c.lambda.size(), 0.0);
  return c;
}

// INI text with a (section, key) -> line index for diagnostics.
class IniFile {
 public:
  IniFile(const std::string& text, std::string source) : source_(std::move(source)) {
    std::istringstream in(text);
    try {
      boost::property_tree::ini_parser::read_ini(in, tree_);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw PreconditionError(source_ + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    std::istringstream again(text);
    std::string line, section;
    int ln = 0;
    while (std::getline(again, line)) {
      ++ln;
      const std::string s = trim(line);
      if (s.empty() || s[0] == ';' || s[0] == '#') continue;
      if (s[0] == '[') {
        section = trim(s.substr(1, s.find(']') - 1));
        lines_[section] = ln;
        continue;
      }
      const auto eq = s.find('=');
      if (eq != std::string::npos) lines_[section + "." + trim(s.substr(0, eq))] = ln;
    }
  }

  bool has_section(const std::string& s) const { return tree_.get_child_optional(s).has_value(); }
  bool has(const std::string& s, const std::string& k) const { return tree_.get_optional<std::string>(s + "." + k).has_value(); }

  std::string where(const std::string& s, const std::string& k = "") const {
    auto it = lines_.find(k.empty() ? s : s + "." + k);
    return source_ + ":" + (it == lines_.end() ? std::string("?") : std::to_string(it->second));
  }
  [[noreturn]] void fail(const std::string& s, const std::string& k, const std::string& m) const {
    throw PreconditionError(where(s, k) + ": [" + s + "] " + k + ": " + m);
  }

  std::string str(const std::string& s, const std::string& k) const {
    auto v = tree_.get_optional<std::string>(s + "." + k);
    if (!v) throw PreconditionError(where(s) + ": [" + s + "] missing key '" + k + "'");
    used_.insert(s + "." + k);
    return trim(*v);
  }
  std::string str(const std::string& s, const std::string& k, const std::string& def) const { return has(s, k) ? str(s, k) : def; }

  std::vector<double> numbers(const std::string& s, const std::string& k) const {
    try {
      return parse_numbers(str(s, k), k);
    } catch (const PreconditionError& e) {
      if (!has(s, k)) throw;
      fail(s, k, e.what());
    }
  }
  double num(const std::string& s, const std::string& k) const {
    const auto v = numbers(s, k);
    if (v.size() != 1) fail(s, k, "expected one number");
    return v[0];
  }
  double num(const std::string& s, const std::string& k, double def) const { return has(s, k) ? num(s, k) : def; }
  long integer(const std::string& s, const std::string& k, long def) const {
    if (!has(s, k)) return def;
    const double v = num(s, k);
    if (v != std::floor(v)) fail(s, k, "expected an integer");
    return static_cast<long>(v);
  }

  // Rejects keys of the listed sections that were never read.
  void reject_unknown(const std::vector<std::string>& sections) const {
    for (const auto& sec : sections) {
      auto c = tree_.get_child_optional(sec);
      if (!c) continue;
      for (const auto& kv : *c)
        if (!used_.count(sec + "." + kv.first)) fail(sec, kv.first, "unknown key");
    }
  }
  std::vector<std::string> sections() const {
    std::vector<std::string> v;
    for (const auto& kv : tree_) v.push_back(kv.first);
    return v;
  }
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  boost::property_tree::ptree tree_;
  std::map<std::string, int> lines_;
  mutable std::set<std::string> used_;
};

struct RunConfig {
  ScalingConfig scaling;
  double wavelength_um = 0.0, thickness_um = 0.0, max_angle_deg = 0.0;
  int angles = 0;
  EtaConvention convention = EtaConvention::Angular;
  double c_step = 40.0;
  bool richardson = false;
  std::string text;
};

// [physical] wavelength_um, thickness_um, n0, max_angle_deg, angles, eta_convention;
// [scaling] alpha, eta (optional override); [grid] lambda_min/max/step (optional); [noise] seed; [solver] c_step, richardson.
inline RunConfig parse_config(const std::string& text, const std::string& source = "<config>") {
  IniFile f(text, source);
  RunConfig c;
  c.text = text;
  if (!f.has_section("physical")) throw PreconditionError(source + ": missing [physical] section");
  c.wavelength_um = f.num("physical", "wavelength_um");
  c.thickness_um = f.num("physical", "thickness_um");
  const double n0 = f.num("physical", "n0");
  c.max_angle_deg = f.num("physical", "max_angle_deg");
  c.angles = static_cast<int>(f.integer("physical", "angles", 200));
  const std::string conv = f.str("physical", "eta_convention", "angular");
  if (conv == "angular") c.convention = EtaConvention::Angular;
  else if (conv == "per_wavelength") c.convention = EtaConvention::PerWavelength;
  else f.fail("physical", "eta_convention", "expected 'angular' or 'per_wavelength'");
  const double alpha = f.num("scaling", "alpha", 0.94);
  if (!(alpha > 0.0 && alpha <= 1.0)) f.fail("scaling", "alpha", "must lie in (0,1]");
  try {
    c.scaling = nondimensionalize(c.wavelength_um, c.thickness_um, n0, c.max_angle_deg, c.angles, alpha, c.convention);
  } catch (const PreconditionError& e) {
    throw PreconditionError(f.where("physical") + ": " + e.what());
  }
  if (f.has("scaling", "eta")) {
    // Keep the admissible interval [cos(max angle), 1]; tau follows the new eta.
    const double eta = f.num("scaling", "eta");
    if (!(eta > 0.0 && eta < 1.0)) f.fail("scaling", "eta", "must lie in (0,1)");
    const double lmin = c.scaling.lambda_grid.front();
    c.scaling.eta = eta;
    c.scaling.tau = lmin * lmin / c.scaling.eta_alpha();
    if (!(c.scaling.tau > 1.0)) f.fail("scaling", "eta", "tau = cos^2(max angle)/eta^alpha must exceed 1");
  }
  if (f.has("grid", "lambda_min") || f.has("grid", "lambda_max") || f.has("grid", "lambda_step")) {
    const double lo = f.num("grid", "lambda_min", c.scaling.lambda_grid.front());
    const double hi = f.num("grid", "lambda_max", 1.0);
    const double st = f.num("grid", "lambda_step", (hi - lo) / std::max(1, c.angles - 1));
    try {
      c.scaling.lambda_grid = stepped_grid(lo, hi, st);
    } catch (const PreconditionError& e) {
      throw PreconditionError(f.where("grid") + ": " + e.what());
    }
  }
  c.scaling.rng_seed = static_cast<std::uint64_t>(f.integer("noise", "seed", 0));
  c.c_step = f.num("solver", "c_step", 40.0);
  if (!(c.c_step >= 4.0)) f.fail("solver", "c_step", "must be at least 4");
  c.richardson = f.integer("solver", "richardson", 0) != 0;
  f.reject_unknown({"physical", "scaling", "grid", "noise", "solver"});
  try {
    c.scaling.validate();
  } catch (const PreconditionError& e) {
    throw PreconditionError(source + ": " + e.what());
  }
  return c;
}

inline RunConfig load_config(const std::string& path) { return parse_config(read_file(path), path); }

// Antisymmetric pair of bumps on [0, 4h]: each copy adds nothing to int sin(2 psi)/(1 + delta cos(2 psi)).
inline ScalarProfile pattern_base(double amplitude, double halfwidth) {
  require(halfwidth > 0.0 && 4.0 * halfwidth <= 1.0, "pattern: need 0 < 4 halfwidth <= 1");
  const auto c = bump_profile(halfwidth, halfwidth, amplitude).coefficients().front();
  std::vector<double> b{0.0, 2.0 * halfwidth, 4.0 * halfwidth};
  std::vector<poly::Coeffs> cs{c, poly::scale(c, -1.0)};
  if (b.back() < 1.0) {
    b.push_back(1.0);
    cs.push_back({0.0});
  } else {
    b.back() = 1.0;
  }
  return ScalarProfile::piecewise(std::move(b), std::move(cs));
}

inline ScalarProfile parse_component(const IniFile& f, const std::string& s) {
  if (!f.has_section(s)) throw PreconditionError(f.source() + ": missing section [" + s + "]");
  const std::string rep = f.str(s, "representation");
  try {
    if (rep == "constant") return ScalarProfile::constant(f.num(s, "value"));
    if (rep == "polynomial") return ScalarProfile::polynomial(f.numbers(s, "coeffs"));
    if (rep == "piecewise") {
      const auto b = f.numbers(s, "breaks");
      std::vector<poly::Coeffs> cs;
      for (const auto& seg : split(f.str(s, "coeffs"), ';')) cs.push_back(parse_numbers(seg, "coeffs"));
      if (cs.size() + 1 != b.size()) f.fail(s, "coeffs", "need one coefficient list per segment (separated by ';')");
      return ScalarProfile::piecewise(b, cs);
    }
    if (rep == "samples") return ScalarProfile::sampled(f.numbers(s, "values"), static_cast<int>(f.integer(s, "order", 3)));
    if (rep == "bump") return bump_profile(f.num(s, "center"), f.num(s, "halfwidth"), f.num(s, "amplitude"));
    if (rep == "sine") {
      const double off = f.num(s, "offset", 0.0), amp = f.num(s, "amplitude"), cyc = f.num(s, "cycles", 1.0);
      return ScalarProfile::from_function([=](double t) { return off + amp * std::sin(std::numbers::pi * cyc * t); }, 16, 11);
    }
    if (rep == "pattern") {
      const auto signs = f.numbers(s, "signs");
      std::vector<int> sg;
      for (double v : signs) {
        if (v != 1.0 && v != -1.0) f.fail(s, "signs", "entries must be +1 or -1");
        sg.push_back(static_cast<int>(v));
      }
      const int slots = static_cast<int>(f.integer(s, "slots", static_cast<long>(sg.size())));
      return pattern_flip_family(pattern_base(f.num(s, "amplitude"), f.num(s, "halfwidth")), slots, sg);
    }
  } catch (const PreconditionError& e) {
    const std::string m = e.what();
    if (m.rfind(f.source(), 0) == 0) throw;
    throw PreconditionError(f.where(s) + ": [" + s + "] " + m);
  }
  f.fail(s, "representation", "unknown representation '" + rep + "'");
}

// [profile] kind = scalar | orthorhombic | uniaxial | general, one section per component.
struct ProfileFile {
  std::string kind;
  std::map<std::string, ScalarProfile> comp;
  double eps_perp = 0.0, eps_par = 0.0;
  std::string text;

  const ScalarProfile& q() const { return at("q"); }
  const ScalarProfile& at(const std::string& k) const {
    auto it = comp.find(k);
    if (it == comp.end()) throw PreconditionError("profile: no component '" + k + "'");
    return it->second;
  }
  DielectricProfile dielectric() const {
    if (kind == "orthorhombic") return DielectricProfile::orthorhombic(at("e11"), at("e22"), at("e33"));
    if (kind == "uniaxial") return DielectricProfile::uniaxial(at("tilt"), at("azimuth"), eps_perp, eps_par);
    if (kind == "general")
      return DielectricProfile::general({at("e11"), at("e22"), at("e33"), at("e12"), at("e13"), at("e23")});
    throw PreconditionError("profile: kind '" + kind + "' has no dielectric tensor");
  }
  double delta() const { return uniaxial_delta(eps_perp, eps_par).delta; }
};

inline ProfileFile parse_profile(const std::string& text, const std::string& source = "<profile>") {
  IniFile f(text, source);
  ProfileFile p;
  p.text = text;
  p.kind = f.str("profile", "kind");
  std::vector<std::string> names;
  if (p.kind == "scalar") names = {"q"};
  else if (p.kind == "orthorhombic") names = {"e11", "e22", "e33"};
  else if (p.kind == "uniaxial") names = {"tilt"};
  else if (p.kind == "general") names = {"e11", "e22", "e33", "e12", "e13", "e23"};
  else f.fail("profile", "kind", "expected scalar, orthorhombic, uniaxial or general");
  for (const auto& n : names) p.comp.emplace(n, parse_component(f, n));
  if (p.kind == "uniaxial") {
    p.comp.emplace("azimuth", f.has_section("azimuth") ? parse_component(f, "azimuth") : ScalarProfile::constant(0.0));
    if (f.has("profile", "delta")) {
      const double d = f.num("profile", "delta"), n0 = f.num("profile", "n0", 1.52);
      if (!(std::abs(d) < 1.0)) f.fail("profile", "delta", "|delta| must be below 1");
      const double n2 = n0 * n0;
      p.eps_perp = n2 * std::sqrt((1 + d) / (1 - d));
      p.eps_par = n2 * std::sqrt((1 - d) / (1 + d));
    } else {
      p.eps_perp = f.num("profile", "eps_perp");
      p.eps_par = f.num("profile", "eps_par");
    }
    try {
      (void)p.dielectric();
    } catch (const PreconditionError& e) {
      throw PreconditionError(f.where("profile") + ": " + e.what());
    }
  } else if (p.kind != "scalar") {
    try {
      (void)p.dielectric();
    } catch (const PreconditionError& e) {
      throw PreconditionError(f.where("profile") + ": " + e.what());
    }
  }
  return p;
}

inline ProfileFile load_profile(const std::string& path) { return parse_profile(read_file(path), path); }

}  // namespace lcpol::io
