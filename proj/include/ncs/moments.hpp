#pragma once

#include "ncs/lift.hpp"

namespace ncs {

struct StabilityReport {
  bool expectation_exists = false;
  bool first_moment_stable = false;
  double first_spectral_radius = 0.0;
  bool second_moment_stable = false;
  double second_spectral_radius = 0.0;

  /// Quadrature error near criticality makes verdicts inside this band
  /// unreliable; such radii report stable = false.
  static constexpr double margin = 1e-9;
};

struct MomentReport {
  StabilityReport stability;
  bool moments_valid = false;  // false when either moment family is unbounded
  Vector mean_x;               // n
  Vector mean_u;               // m
  Matrix second_raw;           // <x x^T>
  Matrix covariance;           // <x x^T> - <x><x>^T
  Matrix variance_channel;     // part proportional to Sigma
  Matrix variance_disturbance; // part driven by (C, D)
};

/// Spectral-radius verdicts for rho(J_y <e^{A_y T}>) and rho(J_mu <e^{A_mu T}>).
StabilityReport stability(const FirstMomentSystem& sys1,
                          const SecondMomentSystem& sys2,
                          const RenewalDistribution& d,
                          const QuadratureSpec& spec = {});

/// Steady-state mean of y = [x; u]. Requires first-moment stability.
Vector steady_mean(const FirstMomentSystem& sys1, const RenewalDistribution& d,
                   const QuadratureSpec& spec = {});

/// Steady-state mu-bar (all first and second moments). Requires
/// second-moment stability.
Vector steady_second(const SecondMomentSystem& sys2,
                     const RenewalDistribution& d,
                     const QuadratureSpec& spec = {});

/// Full report: stability, means, covariance, and the channel/disturbance
/// variance split (two solves, Sigma as given and Sigma = 0).
MomentReport analyze(const NCSModel& model, const QuadratureSpec& spec = {});

}  // namespace ncs
