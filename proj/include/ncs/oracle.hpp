#pragma once

#include <utility>

#include "ncs/renewal.hpp"

namespace ncs {
namespace oracle {

/// Parameters of the one-dimensional system
/// dx = (a_hat + a x + b u) dt + c dw, reset u -> k x + eta, var(eta) = sigma^2.
struct ScalarParams {
  double a_hat = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double k = 0.0;
  double sigma = 0.0;
};

struct ScalarVariance {
  double total = 0.0;
  double channel = 0.0;      // proportional to sigma^2
  double disturbance = 0.0;  // proportional to c^2
};

/// Steady-state mean -a_hat/(a + b k); independent of the interval law.
double scalar_mean(const ScalarParams& p);

/// The two non-zero eigenvalues of J_mu <e^{A_mu T}> in closed form:
///   lambda1 = (E1 (a + bk) - bk) / a
///   lambda2 = (E2 (a + bk)^2 - 2 E1 bk (a + bk) + (bk)^2) / a^2
/// with E1 = <e^{aT}>, E2 = <e^{2aT}>. Requires a != 0.
std::pair<double, double> scalar_eigs(const ScalarParams& p,
                                      const RenewalDistribution& d,
                                      const QuadratureSpec& spec = {});

/// Steady-state variance split into channel and disturbance parts, in terms
/// of <T>, <e^{aT}>, <e^{2aT}> only. Requires a != 0 and scalar_eigs inside
/// the unit circle.
ScalarVariance scalar_variance(const ScalarParams& p,
                               const RenewalDistribution& d,
                               const QuadratureSpec& spec = {});

/// a = 0 limit: the non-zero second-moment eigenvalue
/// b^2 k^2 <T>^2 CV2 + (bk <T> + 1)^2.
double scalar_a0_eig(const ScalarParams& p, const RenewalDistribution& d);

/// a = 0 limit variance, depending only on <T>, <T^2>, <T^3>.
ScalarVariance scalar_a0_variance(const ScalarParams& p,
                                  const RenewalDistribution& d);

/// Small-noise log-normal simplification of the a = 0 variance (an
/// approximation; kept so its regime of validity can be examined against
/// scalar_a0_variance).
ScalarVariance scalar_a0_lognormal_smallnoise(const ScalarParams& p,
                                              double mean_interval, double cv2);

}  // namespace oracle
}  // namespace ncs
