#pragma once

#include <random>
#include <string>

#include "ncs/numerics.hpp"

namespace ncs {

/// Which density weights a renewal expectation: the inter-event density f,
/// or the stationary timer density p = survival / mean.
enum class Measure { Interval, Timer };

/// Inter-transmission interval law. Immutable value type.
class RenewalDistribution {
 public:
  enum class Kind { Exponential, Gamma, LogNormal, Deterministic, Uniform };

  /// Defaults to a unit-period deterministic clock.
  RenewalDistribution() : RenewalDistribution(Kind::Deterministic, 1.0, 0.0) {}

  static RenewalDistribution exponential(double rate);
  static RenewalDistribution gamma(double shape, double scale);
  /// Gamma with prescribed mean and squared coefficient of variation
  /// (shape = 1/cv2, scale = mean * cv2); cv2 = 0 degenerates to Deterministic.
  static RenewalDistribution gamma_mean_cv2(double mean, double cv2);
  static RenewalDistribution lognormal(double location, double scale);
  static RenewalDistribution lognormal_mean_cv2(double mean, double cv2);
  static RenewalDistribution deterministic(double period);
  static RenewalDistribution uniform(double lo, double hi);

  Kind kind() const { return kind_; }
  std::string name() const;
  double param1() const { return p1_; }
  double param2() const { return p2_; }

  double mean() const { return raw_moment(1); }
  double cv2() const;
  /// <T^k>, k in {1, 2, 3}, closed form per kind.
  double raw_moment(int k) const;

  double pdf(double tau) const;
  double survival(double tau) const;
  double hazard(double tau) const;
  /// Stationary timer density p(tau) = survival(tau) / mean.
  double timer_density(double tau) const;
  double quantile(double q) const;

  /// Same family rescaled so the mean becomes new_mean (shape preserved).
  RenewalDistribution scaled_to_mean(double new_mean) const;

  double sample(std::mt19937_64& rng) const;

  /// <e^{M T}> under the interval density, or <e^{M tau}> under the timer
  /// density. Throws DivergenceError when the expectation does not exist.
  Matrix expect_matrix_exp(const Matrix& m, Measure measure,
                           const QuadratureSpec& spec = {}) const;

  /// <e^{A T} \int_0^T e^{-A r} a_hat dr> under the selected density.
  Vector expect_phi(const Matrix& a, const Vector& a_hat, Measure measure,
                    const QuadratureSpec& spec = {}) const;

  /// Scalar convenience: <e^{alpha T}> (interval measure).
  double expect_exp(double alpha, const QuadratureSpec& spec = {}) const;

  /// Support is bounded (Deterministic, Uniform).
  bool bounded_support() const;
  /// Exponential tail decay rate of the density; +inf for bounded support,
  /// 0 for the subexponential log-normal tail.
  double tail_rate() const;

 private:
  RenewalDistribution(Kind kind, double p1, double p2)
      : kind_(kind), p1_(p1), p2_(p2) {}

  /// Truncation point for integrating weight(tau) * e^{alpha tau}.
  double truncation_point(double alpha, const QuadratureSpec& spec) const;
  void check_existence(double alpha) const;

  Kind kind_;
  double p1_, p2_;
};

}  // namespace ncs
