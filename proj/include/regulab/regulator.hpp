#pragma once

#include <cmath>
#include <string>

#include "regulab/errors.hpp"

namespace regulab {

/// Point-split offsets and frequency cutoff: the split points are
/// (t +- eps0/2, x +- eps1/2) and modes are weighted by exp(-omega tau).
struct Regulator {
  double eps0 = 0.0;
  double eps1 = 0.0;
  double tau = 0.0;

  void validate() const {
    if (!(eps0 >= 0.0) || !(eps1 >= 0.0) || !(tau >= 0.0) || !std::isfinite(eps0) ||
        !std::isfinite(eps1) || !std::isfinite(tau))
      throw InvalidArgument("regulator components must be finite and >= 0");
  }
  void require_cutoff() const {
    validate();
    if (!(tau > 0.0)) throw InvalidCutoff("this computation needs tau > 0");
  }
};

/// A regularized density together with its quadrature error and the
/// regulator it was computed with.
struct DensityResult {
  double value = 0.0;
  double error_estimate = 0.0;
  Regulator regulator{};
};

}  // namespace regulab
