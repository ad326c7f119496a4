#pragma once

#include <Eigen/Dense>
#include <functional>

#include "ncs/error.hpp"

namespace ncs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Tolerances and truncation policy for the semi-infinite renewal integrals.
struct QuadratureSpec {
  double relative_tolerance = 1e-10;
  double absolute_tolerance = 1e-12;
  double truncation_quantile = 1.0 - 1e-12;
  int max_subdivisions = 2000;

  void check() const {
    if (relative_tolerance <= 0 || absolute_tolerance <= 0)
      throw DomainError("quadrature tolerances must be positive");
    if (truncation_quantile <= 0 || truncation_quantile >= 1)
      throw DomainError("truncation_quantile must lie in (0, 1)");
    if (max_subdivisions < 1)
      throw DomainError("max_subdivisions must be >= 1");
  }
};

struct QuadratureResult {
  Matrix value;
  double error_bound = 0.0;
};

void require_finite(const Matrix& m, const char* what);

/// e^{M t} (scaling-and-squaring Pade via Eigen).
Matrix matrix_exp(const Matrix& m, double t = 1.0);

/// phi(tau) = e^{A tau} \int_0^tau e^{-A r} a_hat dr, computed through the
/// exponential of the augmented block [[A, a_hat],[0, 0]] so singular A
/// (the a = 0 limit) needs no special casing.
Vector phi_flow(const Matrix& a, const Vector& a_hat, double tau);

/// \int_0^tau e^{A s} ds via the same augmented-exponential trick.
Matrix integral_exp(const Matrix& a, double tau);

/// max |eigenvalue|.
double spectral_radius(const Matrix& m);

/// max real part of the eigenvalues (growth rate of e^{M t}).
double max_real_eigenvalue(const Matrix& m);

/// Adaptive Gauss-Kronrod 7/15 over [lo, hi] for a matrix-valued integrand.
/// Splits the worst interval first; throws NonConvergenceError when the
/// subdivision budget runs out before the tolerances are met.
QuadratureResult adaptive_integrate(const std::function<Matrix(double)>& g,
                                    double lo, double hi,
                                    const QuadratureSpec& spec);

/// Spec'd entry point: integrate over [0, upper].
inline QuadratureResult adaptive_integrate(const std::function<Matrix(double)>& g,
                                           double upper,
                                           const QuadratureSpec& spec) {
  return adaptive_integrate(g, 0.0, upper, spec);
}

}  // namespace ncs
