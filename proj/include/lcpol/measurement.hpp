#pragma once

#include <string>
#include <vector>

namespace lcpol {

// Sampled map lambda -> data value, with its per-point sigma and provenance.
struct MeasurementCurve {
  std::string quantity;  // "D_A", "D_A_prime", "D_B", "abs_TF", ...
  std::vector<double> lambda;
  std::vector<double> value;
  std::vector<double> sigma;
  bool noisy = false;
};

}  // namespace lcpol
