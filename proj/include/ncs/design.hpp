#pragma once

#include "ncs/moments.hpp"

namespace ncs {

enum class DesignObjective { None, TraceCovariance, ComponentVariance };

// Gain synthesis: find K (on the free entries of `free_mask`) achieving a
// target steady-state mean, optionally minimizing a variance objective over
// the remaining freedom. NaN entries of target_mean are unconstrained.
struct DesignProblem {
  NCSModel model_template;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> free_mask;
  Vector target_mean;
  DesignObjective objective = DesignObjective::None;
  int component_row = 0;  // for ComponentVariance
  int component_col = 0;
  double mean_tolerance = 1e-6;
  QuadratureSpec quadrature;
};

struct DesignResult {
  Matrix K;
  Vector achieved_mean;
  Matrix achieved_covariance;
  StabilityReport stability;
  bool feasible = false;
  int iterations = 0;
  double objective_value = 0.0;
};

// Closed form for the scalar plant: mean of -a_hat/(a + b k) equal to x_bar.
double scalar_gain_for_mean(double a_hat, double a, double b, double x_bar);

DesignResult design_gain(const DesignProblem& problem);

}  // namespace ncs
