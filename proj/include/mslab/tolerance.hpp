#pragma once

#include <cmath>

#include "mslab/error.hpp"

namespace mslab {

/// Threshold for rank decisions and residual tests on floating point
/// subspaces. Every "is this vector zero?" question in the library goes
/// through negligible(), so eps is the single knob.
class Tolerance {
public:
  static constexpr double default_eps = 1e-9;

  constexpr Tolerance() = default;
  explicit Tolerance(double eps) : eps_(eps) {
    if (!(eps > 0.0) || !std::isfinite(eps))
      throw Error("tolerance must be a positive finite number");
  }

  double eps() const { return eps_; }

  /// True when a residual of the given size counts as zero relative to a
  /// reference magnitude: residual < eps * (1 + scale).
  bool negligible(double residual, double scale = 0.0) const {
    return residual < eps_ * (1.0 + scale);
  }

private:
  double eps_ = default_eps;
};

} // namespace mslab
