#include "ncs/model.hpp"

#include <cmath>
#include <sstream>

namespace ncs {

std::vector<std::string> validate(const NCSModel& model) {
  std::vector<std::string> out;
  const auto& p = model.plant;
  const auto n = p.A.rows();
  const auto m = p.B.cols();

  auto check_dims = [&](const Matrix& mat, Eigen::Index r, Eigen::Index c,
                        const char* name) {
    if (mat.rows() != r || mat.cols() != c) {
      std::ostringstream os;
      os << name << " must be " << r << "x" << c << ", got " << mat.rows()
         << "x" << mat.cols();
      out.push_back(os.str());
      return false;
    }
    return true;
  };
  auto check_finite = [&](const Matrix& mat, const char* name) {
    if (!mat.allFinite()) out.push_back(std::string(name) + " has non-finite entries");
  };

  check_dims(p.A, n, n, "A");
  check_dims(p.B, n, m, "B");
  check_dims(p.C, n, n, "C");
  check_dims(p.D, n, n, "D");
  if (p.a_hat.size() != n) out.push_back("a_hat length must equal n");
  check_finite(p.A, "A");
  check_finite(p.B, "B");
  check_finite(p.C, "C");
  check_finite(p.D, "D");
  check_finite(p.a_hat, "a_hat");

  const auto& r = model.reset;
  if (check_dims(r.K, m, n, "K")) check_finite(r.K, "K");
  if (check_dims(r.Sigma, m, m, "Sigma")) {
    check_finite(r.Sigma, "Sigma");
    for (Eigen::Index i = 0; i < r.Sigma.rows(); ++i)
      for (Eigen::Index j = 0; j < r.Sigma.cols(); ++j) {
        if (i != j && r.Sigma(i, j) != 0.0) {
          out.push_back("Sigma not diagonal");
          goto diag_done;
        }
        if (i == j && r.Sigma(i, j) < 0.0)
          out.push_back("Sigma has a negative diagonal entry");
      }
  }
diag_done:
  if (!std::isfinite(model.intervals.mean()))
    out.push_back("interval distribution mean is not finite");
  return out;
}

void require_valid(const NCSModel& model) {
  auto violations = validate(model);
  if (violations.empty()) return;
  std::string msg = "invalid model:";
  for (const auto& v : violations) msg += "\n  - " + v;
  throw InvalidModelError(msg);
}

NCSModel scalar_model(double a_hat, double a, double b, double c, double k,
                      double sigma, const RenewalDistribution& intervals) {
  Plant plant;
  plant.a_hat = Vector::Constant(1, a_hat);
  plant.A = Matrix::Constant(1, 1, a);
  plant.B = Matrix::Constant(1, 1, b);
  plant.C = Matrix::Constant(1, 1, c);
  plant.D = Matrix::Zero(1, 1);
  ResetLaw reset;
  reset.K = Matrix::Constant(1, 1, k);
  reset.Sigma = Matrix::Constant(1, 1, sigma * sigma);
  return {plant, reset, intervals};
}

NCSModel two_state_model(double a1, double a2, double gamma1, double gamma2,
                         double k1, double k2, double k3,
                         const RenewalDistribution& intervals, double sigma1,
                         double sigma2) {
  if (a1 < 0) throw DomainError("two_state_model: a1 must be >= 0 (sqrt(a1) diffusion)");
  if (gamma1 < 0 || gamma2 < 0)
    throw DomainError("two_state_model: degradation rates must be >= 0");
  Plant plant;
  plant.a_hat = Vector::Zero(2);
  plant.a_hat(0) = a1;
  plant.A = Matrix::Zero(2, 2);
  plant.A << -gamma1, 0.0, a2, -gamma2;
  plant.B = Matrix::Identity(2, 2);
  plant.C = Matrix::Zero(2, 2);
  plant.C(0, 0) = std::sqrt(a1);
  plant.D = Matrix::Zero(2, 2);
  ResetLaw reset;
  reset.K = Matrix::Zero(2, 2);
  reset.K << -k1, -k2, 0.0, -k3;
  reset.Sigma = Matrix::Zero(2, 2);
  reset.Sigma(0, 0) = sigma1 * sigma1;
  reset.Sigma(1, 1) = sigma2 * sigma2;
  return {plant, reset, intervals};
}

}  // namespace ncs
