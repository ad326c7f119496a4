#pragma once

#include <vector>

#include "ncs/numerics.hpp"
#include "ncs/renewal.hpp"

namespace ncs {

/// dx = (a_hat + A x + B u) dt + (C + D x 1_n) dw_n.
struct Plant {
  Vector a_hat;  // n
  Matrix A;      // n x n
  Matrix B;      // n x m
  Matrix C;      // n x n additive diffusion
  Matrix D;      // n x n multiplicative diffusion

  Eigen::Index n() const { return A.rows(); }
  Eigen::Index m() const { return B.cols(); }
};

/// u(t_s^+) = K x(t_s^-) + eta, <eta eta^T> = Sigma (diagonal).
struct ResetLaw {
  Matrix K;      // m x n
  Matrix Sigma;  // m x m
};

struct NCSModel {
  Plant plant;
  ResetLaw reset;
  RenewalDistribution intervals;
};

/// Every invariant violation as a human-readable description; empty = valid.
std::vector<std::string> validate(const NCSModel& model);

/// Throws InvalidModelError when validate() is non-empty.
void require_valid(const NCSModel& model);

/// One-dimensional system dx = (a_hat + a x + b u) dt + c dw,
/// reset u -> k x + eta with var(eta) = sigma^2.
NCSModel scalar_model(double a_hat, double a, double b, double c, double k,
                      double sigma, const RenewalDistribution& intervals);

/// Two-species birth/degradation network driven through a shared channel:
/// A = [[-gamma1, 0], [a2, -gamma2]], C = diag(sqrt(a1), 0), B = I,
/// K = [[-k1, -k2], [0, -k3]].
NCSModel two_state_model(double a1, double a2, double gamma1, double gamma2,
                         double k1, double k2, double k3,
                         const RenewalDistribution& intervals,
                         double sigma1 = 0.0, double sigma2 = 0.0);

}  // namespace ncs
