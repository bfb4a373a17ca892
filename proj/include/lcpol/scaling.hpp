#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "lcpol/errors.hpp"

namespace lcpol {

// angular: eta = wavelength / (2 pi n0 h).  per_wavelength: eta = wavelength / (n0 h).
enum class EtaConvention { Angular, PerWavelength };

struct ScalingConfig {
  double eta = 0.084;
  double alpha = 0.94;
  double tau = 1.2;
  double n0 = 1.52;
  std::vector<double> lambda_grid;
  std::uint64_t rng_seed = 0;
  bool dense = false;

  double eta_alpha() const { return std::pow(eta, alpha); }
  double lambda_min() const { return std::sqrt(tau * eta_alpha()); }
  // Standard deviation of the measurement error at lambda.
  double noise_sigma(double lambda) const { return std::pow(eta, 5.0 + alpha) / std::pow(lambda, 5.0); }

  void validate() const {
    require(eta > 0.0 && eta < 1.0, "scaling: eta must lie in (0,1)");
    require(tau > 1.0, "scaling: tau must exceed 1");
    require(n0 > 0.0, "scaling: n0 must be positive");
    const double lo = lambda_min();
    for (size_t i = 0; i < lambda_grid.size(); ++i) {
      require(lambda_grid[i] >= lo * (1.0 - 1e-12) && lambda_grid[i] <= 1.0 + 1e-15,
              "scaling: lambda grid leaves [sqrt(tau eta^alpha), 1]");
      if (i > 0) require(lambda_grid[i] > lambda_grid[i - 1], "scaling: lambda grid must be strictly increasing");
    }
    if (dense)
      for (size_t i = 1; i < lambda_grid.size(); ++i)
        require(lambda_grid[i] - lambda_grid[i - 1] <= std::pow(eta, 1.8) * (1 + 1e-12),
                "scaling: dense grid spacing exceeds eta^1.8");
  }
};

inline std::vector<double> uniform_grid(double lo, double hi, int n) {
  require(n >= 2 && hi > lo, "uniform_grid: need n >= 2 and hi > lo");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = (i + 1 == n) ? hi : lo + (hi - lo) * i / (n - 1);
  return g;
}

inline std::vector<double> stepped_grid(double lo, double hi, double step) {
  require(step > 0.0 && hi > lo, "stepped_grid: need step > 0 and hi > lo");
  std::vector<double> g;
  const long n = static_cast<long>(std::floor((hi - lo) / step * (1 + 1e-12)));
  for (long i = 0; i <= n; ++i) g.push_back(lo + step * i);
  return g;
}

// Physical lengths in micrometres; max_angle in degrees.
inline ScalingConfig nondimensionalize(double wavelength, double thickness, double n0, double max_angle_deg, int samples,
                                       double alpha, EtaConvention conv = EtaConvention::Angular) {
  require(wavelength > 0.0 && thickness > 0.0 && n0 > 0.0 && max_angle_deg > 0.0 && samples > 1,
          "nondimensionalize: physical inputs must be positive");
  require(max_angle_deg < 90.0, "nondimensionalize: angle range must stay below 90 degrees");
  ScalingConfig c;
  c.alpha = alpha;
  c.n0 = n0;
  c.eta = wavelength / ((conv == EtaConvention::Angular ? 2.0 * std::numbers::pi : 1.0) * n0 * thickness);
  require(c.eta < 1.0, "nondimensionalize: eta must be below 1");
  const double lmin = std::cos(max_angle_deg * std::numbers::pi / 180.0);
  c.tau = lmin * lmin / c.eta_alpha();
  if (!(c.tau * c.eta_alpha() < 1.0) || c.tau <= 1.0)
    throw PreconditionError("nondimensionalize: admissible lambda interval is empty (tau <= 1 or tau eta^alpha >= 1)");
  c.lambda_grid = uniform_grid(lmin, 1.0, samples);
  return c;
}

struct UniaxialDelta {
  double delta;
  double n0;
};

inline UniaxialDelta uniaxial_delta(double eps_perp, double eps_par) {
  require(eps_perp > 0.0 && eps_par > 0.0, "uniaxial_delta: permittivities must be positive");
  return {(eps_perp - eps_par) / (eps_perp + eps_par), std::sqrt(std::sqrt(eps_perp * eps_par))};
}

}  // namespace lcpol
