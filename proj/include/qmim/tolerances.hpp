#pragma once

#include <cmath>
#include <cstdlib>
#include <string>

#include "json.hpp"

#include "qmim/errors.hpp"

namespace qmim {

/// Numerical thresholds shared by every module. Matrices here have unit
/// trace and entropies of order one, so most thresholds are absolute.
struct Tolerances {
  double hermiticity = 1e-10;      ///< max |rho - rho^dagger| entrywise
  double trace = 1e-10;            ///< |tr rho - 1|, also pure-state norm
  double positivity = 1e-9;        ///< smallest admissible state eigenvalue is -positivity
  double mutual_information = 1e-8;  ///< negative MI within this is clipped to 0
  double pivot = 1e-9;             ///< zero test for congruence pivots and entropies
  double determinant = 1e-9;       ///< base of the order-k minor tolerance
  double zero_row = 1e-8;          ///< largest entry allowed in a zero-entropy row
  double mim_eigen = 1e-9;         ///< relative threshold for the eigenvalue PSD test

  /// Tolerance for an order-k minor: determinant * scale^k.
  double minor(double scale, int order) const {
    return determinant * std::pow(scale, order);
  }

  Tolerances scaled(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor)) {
      throw ArgumentError("tolerance scale must be a positive finite number");
    }
    Tolerances t = *this;
    t.hermiticity *= factor;
    t.trace *= factor;
    t.positivity *= factor;
    t.mutual_information *= factor;
    t.pivot *= factor;
    t.determinant *= factor;
    t.zero_row *= factor;
    t.mim_eigen *= factor;
    return t;
  }

  /// Defaults multiplied by QMIM_TOLERANCE_SCALE when that variable is set.
  static Tolerances from_environment() {
    const char* raw = std::getenv("QMIM_TOLERANCE_SCALE");
    if (raw == nullptr || *raw == '\0') return Tolerances{};
    char* end = nullptr;
    const double factor = std::strtod(raw, &end);
    if (end == raw || *end != '\0') {
      throw ArgumentError(std::string("QMIM_TOLERANCE_SCALE is not a number: ") + raw);
    }
    return Tolerances{}.scaled(factor);
  }
};

inline nlohmann::json to_json(const Tolerances& t) {
  return {{"hermiticity", t.hermiticity},
          {"trace", t.trace},
          {"positivity", t.positivity},
          {"mutual_information", t.mutual_information},
          {"pivot", t.pivot},
          {"determinant", t.determinant},
          {"zero_row", t.zero_row},
          {"mim_eigen", t.mim_eigen}};
}

}  // namespace qmim
