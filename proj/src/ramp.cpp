#include "kcd/ramp.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kcd {

namespace {

void check_time(const RampSchedule& r, double t) {
  r.check();
  if (!(t >= 0 && t <= r.tau)) throw std::out_of_range("ramp time " + std::to_string(t) + " outside [0, tau]");
}

}  // namespace

void RampSchedule::check() const {
  if (!(tau > 0) || !std::isfinite(tau)) throw std::invalid_argument("ramp duration tau must be positive");
  if (form != kDefaultForm) throw std::invalid_argument("unknown ramp form '" + form + "'");
}

double lambda_at(const RampSchedule& ramp, double t) {
  check_time(ramp, t);
  using std::numbers::pi;
  const double s = std::sin(pi * t / (2 * ramp.tau));
  const double c = std::cos(pi / 2 * s * s);
  return c * c;
}

double lambda_dot_at(const RampSchedule& ramp, double t) {
  check_time(ramp, t);
  using std::numbers::pi;
  const double v = pi * t / (2 * ramp.tau);
  const double s = std::sin(v);
  const double u = pi / 2 * s * s;
  // d/dt cos^2(u) = -sin(2u) u',  u' = (pi^2 / (4 tau)) sin(2v)
  return -std::sin(2 * u) * (pi * pi / (4 * ramp.tau)) * std::sin(2 * v);
}

}  // namespace kcd
