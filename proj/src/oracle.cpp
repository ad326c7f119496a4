#include "ncs/oracle.hpp"

#include <cmath>

namespace ncs {
namespace oracle {

double scalar_mean(const ScalarParams& p) {
  const double denom = p.a + p.b * p.k;
  if (denom == 0.0)
    throw DomainError("scalar_mean: a + b k = 0 (degenerate)");
  return -p.a_hat / denom;
}

std::pair<double, double> scalar_eigs(const ScalarParams& p,
                                      const RenewalDistribution& d,
                                      const QuadratureSpec& spec) {
  if (p.a == 0.0)
    throw DomainError("scalar_eigs: a = 0 (use scalar_a0_eig)");
  const double e1 = d.expect_exp(p.a, spec);
  const double e2 = d.expect_exp(2.0 * p.a, spec);
  const double bk = p.b * p.k;
  const double s = p.a + bk;
  const double lambda1 = (e1 * s - bk) / p.a;
  const double lambda2 = (e2 * s * s - 2.0 * e1 * bk * s + bk * bk) / (p.a * p.a);
  return {lambda1, lambda2};
}

ScalarVariance scalar_variance(const ScalarParams& p,
                               const RenewalDistribution& d,
                               const QuadratureSpec& spec) {
  const auto [l1, l2] = scalar_eigs(p, d, spec);
  if (std::abs(l1) >= 1.0 || std::abs(l2) >= 1.0)
    throw InstabilityError("scalar_variance: second-moment eigenvalue outside "
                           "the unit circle",
                           std::max(std::abs(l1), std::abs(l2)));
  const double a = p.a, b = p.b, k = p.k;
  const double e1 = d.expect_exp(a, spec);
  const double e2 = d.expect_exp(2.0 * a, spec);
  const double mt = d.mean();
  const double bk = b * k;

  const double den =
      mt * a * a * (a + bk) * (-2.0 * e1 * bk + e2 * a + e2 * bk - a + bk);
  const double ch_num =
      b * b *
      (-e1 * e2 * a - e1 * e2 * bk - 2.0 * e1 * mt * a * bk + e1 * a + e1 * bk +
       e2 * mt * a * a + 2.0 * e2 * mt * a * bk + e2 * a + e2 * bk -
       mt * a * a - a - bk);
  const double dd_num =
      e1 * e2 * a * bk + e1 * e2 * bk * bk + 2.0 * e1 * mt * a * a * bk +
      2.0 * e1 * mt * a * bk * bk - e1 * a * bk - e1 * bk * bk -
      e2 * mt * a * a * a - 2.0 * e2 * mt * a * a * bk -
      2.0 * e2 * mt * a * bk * bk - e2 * a * bk - e2 * bk * bk +
      mt * a * a * a + a * bk + bk * bk;

  ScalarVariance v;
  v.channel = p.sigma * p.sigma * ch_num / den;
  v.disturbance = p.c * p.c * dd_num / (2.0 * den);
  v.total = v.channel + v.disturbance;
  return v;
}

double scalar_a0_eig(const ScalarParams& p, const RenewalDistribution& d) {
  if (p.a != 0.0) throw DomainError("scalar_a0_eig: a must be 0");
  const double bk = p.b * p.k;
  const double mt = d.mean();
  const double base = bk * mt + 1.0;
  return bk * bk * mt * mt * d.cv2() + base * base;
}

ScalarVariance scalar_a0_variance(const ScalarParams& p,
                                  const RenewalDistribution& d) {
  if (p.a != 0.0) throw DomainError("scalar_a0_variance: a must be 0");
  if (p.b * p.k >= 0)
    throw DomainError("scalar_a0_variance: bk must be negative for a finite mean");
  if (scalar_a0_eig(p, d) >= 1.0)
    throw InstabilityError("scalar_a0_variance: second-moment eigenvalue "
                           "outside the unit circle",
                           scalar_a0_eig(p, d));
  const double b = p.b, k = p.k, bk = p.b * p.k;
  const double t1 = d.raw_moment(1);
  const double t2 = d.raw_moment(2);
  const double t3 = d.raw_moment(3);
  const double gate = 2.0 * t1 + t2 * bk;  // stability factor (1 - eig) / (-bk)

  ScalarVariance v;
  v.channel = p.sigma * p.sigma * b *
              (-3.0 * t1 * t2 + 2.0 * t1 * t3 * bk - 3.0 * t2 * t2 * bk) /
              (3.0 * t1 * k * gate);
  v.disturbance = -p.c * p.c *
                  (6.0 * t1 * t1 + 2.0 * t1 * t3 * bk * bk -
                   3.0 * t2 * t2 * bk * bk) /
                  (6.0 * t1 * bk * gate);
  v.total = v.channel + v.disturbance;
  return v;
}

ScalarVariance scalar_a0_lognormal_smallnoise(const ScalarParams& p,
                                              double mean_interval,
                                              double cv2) {
  if (p.a != 0.0)
    throw DomainError("scalar_a0_lognormal_smallnoise: a must be 0");
  const double b = p.b, k = p.k, bk = p.b * p.k, mt = mean_interval;
  ScalarVariance v;
  v.channel = p.sigma * p.sigma *
              (-b * cv2 * mt / (k * (bk * mt + 2.0)) - b * mt / (2.0 * k));
  v.disturbance =
      p.c * p.c * (cv2 * mt / (bk * mt + 2.0) + (bk * mt - 2.0) / (4.0 * bk));
  v.total = v.channel + v.disturbance;
  return v;
}

}  // namespace oracle
}  // namespace ncs
