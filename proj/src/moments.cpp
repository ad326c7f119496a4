#include "ncs/moments.hpp"

#include <cmath>
#include <limits>

namespace ncs {

namespace {

bool verdict(double rho) { return rho < 1.0 - StabilityReport::margin; }

/// Common fixed point: <e^{A tau}>_p (I - J <e^{A T}>_f)^{-1} (J <phi(T)>_f + r)
/// + <phi(tau)>_p.
Vector renewal_fixed_point(const Matrix& A, const Vector& a_hat, const Matrix& J,
                           const Vector& r, const RenewalDistribution& d,
                           const QuadratureSpec& spec, const char* what) {
  const Matrix exp_interval = d.expect_matrix_exp(A, Measure::Interval, spec);
  const Matrix gain = J * exp_interval;
  const double rho = spectral_radius(gain);
  if (!verdict(rho))
    throw InstabilityError(std::string(what) +
                               ": spectral radius " + std::to_string(rho) +
                               " is not inside the unit circle",
                           rho);
  const Vector phi_interval = d.expect_phi(A, a_hat, Measure::Interval, spec);
  const Matrix I = Matrix::Identity(A.rows(), A.cols());
  Eigen::PartialPivLU<Matrix> lu(I - gain);
  const Vector post_event = lu.solve(J * phi_interval + r);

  const Matrix exp_timer = d.expect_matrix_exp(A, Measure::Timer, spec);
  const Vector phi_timer = d.expect_phi(A, a_hat, Measure::Timer, spec);
  return exp_timer * post_event + phi_timer;
}

}  // namespace

StabilityReport stability(const FirstMomentSystem& sys1,
                          const SecondMomentSystem& sys2,
                          const RenewalDistribution& d,
                          const QuadratureSpec& spec) {
  StabilityReport rep;
  try {
    const Matrix e1 = d.expect_matrix_exp(sys1.A_y, Measure::Interval, spec);
    const Matrix e2 = d.expect_matrix_exp(sys2.A_mu, Measure::Interval, spec);
    rep.expectation_exists = true;
    rep.first_spectral_radius = spectral_radius(sys1.J_y * e1);
    rep.second_spectral_radius = spectral_radius(sys2.J_mu * e2);
    rep.first_moment_stable = verdict(rep.first_spectral_radius);
    rep.second_moment_stable = verdict(rep.second_spectral_radius);
  } catch (const DivergenceError&) {
    rep.expectation_exists = false;
    rep.first_moment_stable = false;
    rep.second_moment_stable = false;
    rep.first_spectral_radius = std::numeric_limits<double>::infinity();
    rep.second_spectral_radius = std::numeric_limits<double>::infinity();
  }
  return rep;
}

Vector steady_mean(const FirstMomentSystem& sys1, const RenewalDistribution& d,
                   const QuadratureSpec& spec) {
  return renewal_fixed_point(sys1.A_y, sys1.a_hat_y, sys1.J_y,
                             Vector::Zero(sys1.dim()), d, spec, "steady_mean");
}

Vector steady_second(const SecondMomentSystem& sys2,
                     const RenewalDistribution& d, const QuadratureSpec& spec) {
  return renewal_fixed_point(sys2.A_mu, sys2.a_hat_mu, sys2.J_mu, sys2.R_mu, d,
                             spec, "steady_second");
}

MomentReport analyze(const NCSModel& model, const QuadratureSpec& spec) {
  require_valid(model);
  const FirstMomentSystem sys1 = lift_first(model);
  const SecondMomentSystem sys2 = lift_second(model);

  MomentReport rep;
  rep.stability = stability(sys1, sys2, model.intervals, spec);
  if (!rep.stability.first_moment_stable || !rep.stability.second_moment_stable)
    return rep;

  const auto n = sys1.n;
  const auto m = sys1.m;
  const Vector ybar = steady_mean(sys1, model.intervals, spec);
  rep.mean_x = ybar.head(n);
  rep.mean_u = ybar.tail(m);

  auto covariance_of = [&](const SecondMomentSystem& sys) {
    const Vector mu = steady_second(sys, model.intervals, spec);
    const Matrix raw = unvec(mu.segment(sys.offset_xx(), n * n), n, n);
    const Matrix sym = 0.5 * (raw + raw.transpose());
    return std::make_pair(sym, Matrix(sym - rep.mean_x * rep.mean_x.transpose()));
  };

  auto [raw, cov] = covariance_of(sys2);
  rep.second_raw = raw;
  rep.covariance = cov;

  // Sigma = 0 solve isolates the disturbance-driven part (the fixed point is
  // affine in R_mu).
  SecondMomentSystem no_channel = sys2;
  no_channel.R_mu.setZero();
  rep.variance_disturbance = covariance_of(no_channel).second;
  rep.variance_channel = rep.covariance - rep.variance_disturbance;
  rep.moments_valid = true;
  return rep;
}

}  // namespace ncs
