#pragma once

#include <stdexcept>
#include <vector>

#include "kcd/state.hpp"

namespace kcd {

class StepToleranceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KrylovOptions {
  int krylov_dim = 30;
  /// Local error target for one call, as a fraction of the unit state norm.
  double tolerance = 1e-10;
  /// A call is refused if it would need more sub-steps than this.
  int max_substeps = 200;
};

struct KrylovStats {
  int substeps = 0;
  int matvecs = 0;
  double error_estimate = 0;  // sum over sub-steps
};

/// v <- exp(-i H dt) v by Lanczos projection onto span{v, Hv, ...}.
///
/// The basis is fully reorthogonalized and stops growing as soon as the
/// error estimate for the remaining time meets the target. If the a-posteriori estimate
/// beta_m |[exp(-i T h) e_1]_m| exceeds the share tolerance * h / dt of a
/// trial sub-step h, h is halved with the same basis; the remaining time is
/// then covered by further sub-steps. The norm is not renormalized.
KrylovStats krylov_evolve(const CompiledOperator& H, Amplitudes& v, double dt, const KrylovOptions& opts = {});

/// krylov_evolve with the basis kept between calls, for long runs at a fixed
/// dimension.
class KrylovPropagator {
 public:
  KrylovPropagator(Eigen::Index dim, const KrylovOptions& opts);
  KrylovStats evolve(const CompiledOperator& H, Amplitudes& v, double dt);
  const KrylovOptions& options() const noexcept { return opts_; }

 private:
  KrylovOptions opts_;
  std::vector<Amplitudes> basis_;
  Amplitudes w_;
};

}  // namespace kcd
