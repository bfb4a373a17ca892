#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "lcpol/io.hpp"

using namespace lcpol;
namespace fs = std::filesystem;

namespace {

std::string src(const std::string& rel) { return std::string(LCPOL_SOURCE_DIR) + "/" + rel; }

template <class F>
std::string error_of(F&& f) {
  try {
    f();
  } catch (const PreconditionError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Csv, RoundTripIsExact) {
  io::Table t;
  t.meta = {{"quantity", "D_A"}, {"noisy", "0"}};
  t.columns = {"lambda", "value"};
  t.rows = {{0.5, 1.0 / 3.0}, {0.75, -2.5e-17}, {1.0, std::nextafter(1.0, 2.0)}};
  const auto text = io::to_csv(t);
  const auto u = io::parse_csv(text);
  EXPECT_EQ(u.columns, t.columns);
  EXPECT_EQ(u.get_meta("quantity"), "D_A");
  ASSERT_EQ(u.rows.size(), 3u);
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = 0; j < 2; ++j) EXPECT_EQ(u.rows[i][j], t.rows[i][j]);
  EXPECT_EQ(io::to_csv(u), text);
}

TEST(Csv, CurveRoundTrip) {
  MeasurementCurve c;
  c.quantity = "D_B";
  c.noisy = true;
  c.lambda = {0.5, 0.6};
  c.value = {1.1, 1.2};
  c.sigma = {1e-3, 2e-3};
  const auto d = io::curve_from_table(io::parse_csv(io::to_csv(io::curve_table(c))));
  EXPECT_EQ(d.quantity, "D_B");
  EXPECT_TRUE(d.noisy);
  EXPECT_EQ(d.value, c.value);
  EXPECT_EQ(d.sigma, c.sigma);
}

TEST(Csv, RejectsUnknownVersion) {
  EXPECT_NE(error_of([] { io::parse_csv("# lcpol-csv v2\na\n1\n"); }).find("unsupported schema version 2"), std::string::npos);
  EXPECT_NE(error_of([] { io::parse_csv("a,b\n1,2\n"); }).find("header"), std::string::npos);
}

TEST(Csv, ErrorsCarryLineNumbers) {
  EXPECT_NE(error_of([] { io::parse_csv("# lcpol-csv v1\na,b\n1,2\n1\n", "x.csv"); }).find("x.csv:4:"), std::string::npos);
  EXPECT_NE(error_of([] { io::parse_csv("# lcpol-csv v1\na\nfoo\n", "y.csv"); }).find("y.csv:3: bad number"), std::string::npos);
}

TEST(Csv, MissingColumn) { EXPECT_THROW(io::parse_csv("# lcpol-csv v1\na\n1\n").column("b"), PreconditionError); }

TEST(Config, CanonicalValues) {
  const auto c = io::load_config(src("configs/canonical.ini"));
  EXPECT_NEAR(c.scaling.eta, 0.633 / (1.52 * 5), 1e-15);
  EXPECT_EQ(c.scaling.alpha, 0.94);
  EXPECT_EQ(c.scaling.lambda_grid.size(), 200u);
  EXPECT_NEAR(c.scaling.lambda_grid.front(), std::cos(70 * std::numbers::pi / 180), 1e-15);
  EXPECT_GT(c.scaling.tau, 1.0);
  EXPECT_EQ(c.scaling.rng_seed, 1u);
  EXPECT_FALSE(c.richardson);
}

TEST(Config, RejectsUnknownKey) {
  const std::string text = "[physical]\nwavelength_um = 0.633\nthickness_um = 5\nn0 = 1.52\nmax_angle_deg = 70\nbogus = 1\n";
  const auto e = error_of([&] { io::parse_config(text, "c.ini"); });
  EXPECT_NE(e.find("c.ini:6:"), std::string::npos) << e;
  EXPECT_NE(e.find("unknown key"), std::string::npos) << e;
}

TEST(Config, RejectsBadValues) {
  const std::string base = "[physical]\nwavelength_um = 0.633\nthickness_um = 5\nn0 = 1.52\nmax_angle_deg = 70\n";
  EXPECT_THROW(io::parse_config(base + "[scaling]\nalpha = 1.5\n"), PreconditionError);
  EXPECT_THROW(io::parse_config(base + "eta_convention = other\n"), PreconditionError);
  EXPECT_THROW(io::parse_config(base + "[solver]\nc_step = 1\n"), PreconditionError);
  EXPECT_THROW(io::parse_config("[physical]\nwavelength_um = 0.633\n"), PreconditionError);
  EXPECT_NO_THROW(io::parse_config(base));
}

TEST(Config, EtaOverrideKeepsInterval) {
  const std::string base = "[physical]\nwavelength_um = 0.633\nthickness_um = 5\nn0 = 1.52\nmax_angle_deg = 60\n";
  const auto c = io::parse_config(base + "[scaling]\neta = 0.05\n");
  EXPECT_EQ(c.scaling.eta, 0.05);
  EXPECT_NEAR(c.scaling.tau, 0.25 / std::pow(0.05, 0.94), 1e-12);
}

TEST(Profile, EveryShippedProfileParses) {
  for (const auto& e : fs::directory_iterator(src("configs/profiles"))) {
    const auto p = io::load_profile(e.path().string());
    EXPECT_FALSE(p.kind.empty()) << e.path();
  }
}

TEST(Profile, Representations) {
  EXPECT_EQ(io::parse_profile("[profile]\nkind = scalar\n[q]\nrepresentation = constant\nvalue = 0.3\n").q()(0.7), 0.3);
  EXPECT_NEAR(io::parse_profile("[profile]\nkind = scalar\n[q]\nrepresentation = polynomial\ncoeffs = 0.2, 0.3\n").q()(0.5), 0.35,
              1e-15);
  const auto pw = io::parse_profile("[profile]\nkind = scalar\n[q]\nrepresentation = piecewise\nbreaks = 0, 0.5, 1\ncoeffs = 1; 2, 1\n");
  EXPECT_EQ(pw.q()(0.25), 1.0);
  EXPECT_NEAR(pw.q()(0.75), 2.25, 1e-15);
  const auto sm = io::parse_profile("[profile]\nkind = scalar\n[q]\nrepresentation = samples\nvalues = 0, 0.25, 0.5, 0.75, 1\norder = 1\n");
  EXPECT_NEAR(sm.q()(0.6), 0.6, 1e-15);
  const auto bp = io::parse_profile("[profile]\nkind = scalar\n[q]\nrepresentation = bump\ncenter = 0.5\nhalfwidth = 0.1\namplitude = 0.2\n");
  EXPECT_NEAR(bp.q()(0.5), 0.2, 1e-14);
  EXPECT_EQ(bp.q()(0.1), 0.0);
  const auto sn = io::parse_profile("[profile]\nkind = scalar\n[q]\nrepresentation = sine\namplitude = 0.5\n");
  EXPECT_NEAR(sn.q()(0.5), 0.5, 1e-10);
}

TEST(Profile, UniaxialDeltaSetsPermittivities) {
  const auto p = io::load_profile(src("configs/profiles/sign_change.ini"));
  EXPECT_NEAR(p.delta(), 0.05, 1e-14);
  EXPECT_NEAR(p.at("tilt")(0.25), 0.3, 1e-15);
  EXPECT_NEAR(p.at("tilt")(0.75), -0.3, 1e-15);
  EXPECT_EQ(p.at("azimuth")(0.5), 0.0);
}

TEST(Profile, Errors) {
  EXPECT_THROW(io::parse_profile("[profile]\nkind = nematic\n"), PreconditionError);
  EXPECT_THROW(io::parse_profile("[profile]\nkind = scalar\n"), PreconditionError);
  const auto e = error_of([] {
    io::parse_profile("[profile]\nkind = scalar\n[q]\nrepresentation = piecewise\nbreaks = 0, 0.5, 1\ncoeffs = 1\n", "p.ini");
  });
  EXPECT_NE(e.find("p.ini:6:"), std::string::npos) << e;
  EXPECT_THROW(io::parse_profile("[profile]\nkind = scalar\n[q]\nrepresentation = spline\n"), PreconditionError);
  EXPECT_THROW(io::parse_profile("[profile]\nkind = uniaxial\ndelta = 1.2\n[tilt]\nrepresentation = constant\nvalue = 0\n"),
               PreconditionError);
}

TEST(AtomicWrite, ReplacesWithoutLeftovers) {
  const auto dir = fs::temp_directory_path() / ("lcpol_io_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  const auto path = (dir / "sub" / "a.txt").string();
  io::write_atomic(path, "first");
  io::write_atomic(path, "second");
  EXPECT_EQ(io::read_file(path), "second");
  int n = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "sub")) ++n;
  EXPECT_EQ(n, 1);
  fs::remove_all(dir);
  EXPECT_THROW(io::read_file(path), PreconditionError);
}
