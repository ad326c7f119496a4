#include "ncs/lift.hpp"

namespace ncs {

Matrix kron(const Matrix& left, const Matrix& right) {
  Matrix out(left.rows() * right.rows(), left.cols() * right.cols());
  for (Eigen::Index i = 0; i < left.rows(); ++i)
    for (Eigen::Index j = 0; j < left.cols(); ++j)
      out.block(i * right.rows(), j * right.cols(), right.rows(),
                right.cols()) = left(i, j) * right;
  return out;
}

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols)
    throw DimensionError("unvec: size mismatch");
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Matrix commutation(Eigen::Index rows, Eigen::Index cols) {
  Matrix k = Matrix::Zero(rows * cols, rows * cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      k(j + i * cols, i + j * rows) = 1.0;
  return k;
}

FirstMomentSystem lift_first(const NCSModel& model) {
  require_valid(model);
  const auto& p = model.plant;
  const auto n = p.n();
  const auto m = p.m();

  FirstMomentSystem sys;
  sys.n = n;
  sys.m = m;
  sys.a_hat_y = Vector::Zero(n + m);
  sys.a_hat_y.head(n) = p.a_hat;

  sys.A_y = Matrix::Zero(n + m, n + m);
  sys.A_y.topLeftCorner(n, n) = p.A;
  sys.A_y.topRightCorner(n, m) = p.B;

  sys.J_y = Matrix::Zero(n + m, n + m);
  sys.J_y.topLeftCorner(n, n) = Matrix::Identity(n, n);
  sys.J_y.bottomLeftCorner(m, n) = model.reset.K;

  sys.C_y = Matrix::Zero(n + m, n + m);
  sys.C_y.topLeftCorner(n, n) = p.C;
  sys.D_y = Matrix::Zero(n + m, n + m);
  sys.D_y.topLeftCorner(n, n) = p.D;
  return sys;
}

SecondMomentSystem lift_second(const NCSModel& model) {
  require_valid(model);
  const auto& p = model.plant;
  const auto& K = model.reset.K;
  const auto n = p.n();
  const auto m = p.m();

  SecondMomentSystem sys;
  sys.n = n;
  sys.m = m;
  const auto dim = sys.dim();
  const auto ox = sys.offset_x(), ou = sys.offset_u(), oxx = sys.offset_xx(),
             oxu = sys.offset_xu(), ouu = sys.offset_uu();

  const Matrix In = Matrix::Identity(n, n);
  const Matrix Im = Matrix::Identity(m, m);
  const Vector ones = Vector::Ones(n);
  const Matrix a_hat = p.a_hat;  // n x 1

  sys.a_hat_mu = Vector::Zero(dim);
  sys.a_hat_mu.segment(ox, n) = p.a_hat;
  sys.a_hat_mu.segment(oxx, n * n) = vec(p.C * p.C.transpose());

  // d vec(xx^T)/dt coupling blocks.
  const Matrix M1 = kron(In, a_hat) + kron(a_hat, In) +
                    kron(p.D, p.C * ones) + kron(p.C * ones, p.D);
  const Matrix M2 = kron(In, p.A) + kron(p.A, In) +
                    static_cast<double>(n) * kron(p.D, p.D);
  // vec(B u x^T) reads vec(u x^T) = commutation * vec(x u^T).
  const Matrix M3 = kron(p.B, In) + kron(In, p.B) * commutation(n, m);

  sys.A_mu = Matrix::Zero(dim, dim);
  sys.A_mu.block(ox, ox, n, n) = p.A;
  sys.A_mu.block(ox, ou, n, m) = p.B;
  sys.A_mu.block(oxx, ox, n * n, n) = M1;
  sys.A_mu.block(oxx, oxx, n * n, n * n) = M2;
  sys.A_mu.block(oxx, oxu, n * n, n * m) = M3;
  sys.A_mu.block(oxu, ou, n * m, m) = kron(Im, a_hat);
  sys.A_mu.block(oxu, oxu, n * m, n * m) = kron(Im, p.A);
  sys.A_mu.block(oxu, ouu, n * m, m * m) = kron(Im, p.B);

  sys.J_mu = Matrix::Zero(dim, dim);
  sys.J_mu.block(ox, ox, n, n) = In;
  sys.J_mu.block(ou, ox, m, n) = K;
  sys.J_mu.block(oxx, oxx, n * n, n * n) = Matrix::Identity(n * n, n * n);
  sys.J_mu.block(oxu, oxx, n * m, n * n) = kron(K, In);
  sys.J_mu.block(ouu, oxx, m * m, n * n) = kron(K, K);

  sys.R_mu = Vector::Zero(dim);
  sys.R_mu.segment(ouu, m * m) = vec(model.reset.Sigma);
  return sys;
}

}  // namespace ncs
