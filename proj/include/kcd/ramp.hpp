#pragma once

#include <string>

namespace kcd {

/// lambda(t) = cos^2((pi/2) sin^2(pi t / (2 tau))), running from 1 at t = 0
/// to 0 at t = tau with vanishing slope at both ends.
struct RampSchedule {
  static constexpr const char* kDefaultForm = "paper-cos2sin2";

  double tau = 1.0;
  std::string form = kDefaultForm;

  /// Throws unless tau > 0 and the form is known.
  void check() const;
};

/// Both throw std::out_of_range for t outside [0, tau].
double lambda_at(const RampSchedule& ramp, double t);
double lambda_dot_at(const RampSchedule& ramp, double t);

}  // namespace kcd
