#pragma once

#include "ncs/model.hpp"

namespace ncs {

Matrix kron(const Matrix& left, const Matrix& right);
/// Column-stacking vectorization.
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols);
/// K such that vec(Z^T) = K vec(Z) for Z of shape rows x cols.
Matrix commutation(Eigen::Index rows, Eigen::Index cols);

/// Augmented first-moment system for y = [x; u]:
/// dy = (a_hat_y + A_y y) dt + (C_y + D_y y 1) dw, jump y+ = J_y y-.
struct FirstMomentSystem {
  Eigen::Index n = 0, m = 0;
  Vector a_hat_y;
  Matrix A_y, J_y;
  Matrix C_y, D_y;  // diffusion blocks, reused by the simulator

  Eigen::Index dim() const { return n + m; }
};

/// Kronecker-lifted second-moment system for
/// mu = [x; u; vec(xx^T); vec(xu^T); vec(uu^T)]:
/// mu' = a_hat_mu + A_mu mu between events, mu+ = J_mu mu- + R_mu at events.
struct SecondMomentSystem {
  Eigen::Index n = 0, m = 0;
  Vector a_hat_mu;
  Matrix A_mu, J_mu;
  Vector R_mu;

  Eigen::Index dim() const { return n + m + n * n + n * m + m * m; }
  Eigen::Index offset_x() const { return 0; }
  Eigen::Index offset_u() const { return n; }
  Eigen::Index offset_xx() const { return n + m; }
  Eigen::Index offset_xu() const { return n + m + n * n; }
  Eigen::Index offset_uu() const { return n + m + n * n + n * m; }
};

FirstMomentSystem lift_first(const NCSModel& model);
SecondMomentSystem lift_second(const NCSModel& model);

}  // namespace ncs
