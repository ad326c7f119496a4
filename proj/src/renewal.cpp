#include "ncs/renewal.hpp"

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/lognormal.hpp>

#include <cmath>
#include <limits>

namespace ncs {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

boost::math::gamma_distribution<> boost_gamma(double shape, double scale) {
  return boost::math::gamma_distribution<>(shape, scale);
}
boost::math::lognormal_distribution<> boost_lognormal(double loc, double scale) {
  return boost::math::lognormal_distribution<>(loc, scale);
}
}  // namespace

RenewalDistribution RenewalDistribution::exponential(double rate) {
  if (!(rate > 0)) throw DomainError("Exponential rate must be > 0");
  return {Kind::Exponential, rate, 0.0};
}

RenewalDistribution RenewalDistribution::gamma(double shape, double scale) {
  if (!(shape > 0) || !(scale > 0))
    throw DomainError("Gamma shape and scale must be > 0");
  return {Kind::Gamma, shape, scale};
}

RenewalDistribution RenewalDistribution::gamma_mean_cv2(double mean, double cv2) {
  if (!(mean > 0)) throw DomainError("Gamma mean must be > 0");
  if (cv2 < 0) throw DomainError("cv2 must be >= 0");
  if (cv2 == 0.0) return deterministic(mean);
  return gamma(1.0 / cv2, mean * cv2);
}

RenewalDistribution RenewalDistribution::lognormal(double location, double scale) {
  if (!(scale > 0)) throw DomainError("LogNormal scale must be > 0");
  if (!std::isfinite(location)) throw DomainError("LogNormal location must be finite");
  return {Kind::LogNormal, location, scale};
}

RenewalDistribution RenewalDistribution::lognormal_mean_cv2(double mean, double cv2) {
  if (!(mean > 0) || !(cv2 > 0))
    throw DomainError("LogNormal mean and cv2 must be > 0");
  const double s2 = std::log1p(cv2);
  return lognormal(std::log(mean) - 0.5 * s2, std::sqrt(s2));
}

RenewalDistribution RenewalDistribution::deterministic(double period) {
  if (!(period > 0)) throw DomainError("Deterministic period must be > 0");
  return {Kind::Deterministic, period, 0.0};
}

RenewalDistribution RenewalDistribution::uniform(double lo, double hi) {
  if (!(lo >= 0) || !(hi > lo))
    throw DomainError("Uniform requires 0 <= lo < hi");
  return {Kind::Uniform, lo, hi};
}

std::string RenewalDistribution::name() const {
  switch (kind_) {
    case Kind::Exponential: return "exponential";
    case Kind::Gamma: return "gamma";
    case Kind::LogNormal: return "lognormal";
    case Kind::Deterministic: return "deterministic";
    case Kind::Uniform: return "uniform";
  }
  return "?";
}

double RenewalDistribution::raw_moment(int k) const {
  if (k < 1 || k > 3) throw DomainError("raw_moment: k must be in 1..3");
  switch (kind_) {
    case Kind::Exponential: {
      double f = 1.0;
      for (int i = 2; i <= k; ++i) f *= i;
      return f / std::pow(p1_, k);
    }
    case Kind::Gamma: {
      double m = 1.0;
      for (int i = 0; i < k; ++i) m *= (p1_ + i) * p2_;
      return m;
    }
    case Kind::LogNormal:
      return std::exp(k * p1_ + 0.5 * k * k * p2_ * p2_);
    case Kind::Deterministic:
      return std::pow(p1_, k);
    case Kind::Uniform:
      return (std::pow(p2_, k + 1) - std::pow(p1_, k + 1)) /
             ((k + 1) * (p2_ - p1_));
  }
  return 0;
}

double RenewalDistribution::cv2() const {
  const double m1 = raw_moment(1);
  return (raw_moment(2) - m1 * m1) / (m1 * m1);
}

double RenewalDistribution::pdf(double tau) const {
  if (tau < 0) throw DomainError("pdf: tau must be >= 0");
  switch (kind_) {
    case Kind::Exponential:
      return p1_ * std::exp(-p1_ * tau);
    case Kind::Gamma:
      return boost::math::pdf(boost_gamma(p1_, p2_), tau);
    case Kind::LogNormal:
      return tau > 0 ? boost::math::pdf(boost_lognormal(p1_, p2_), tau) : 0.0;
    case Kind::Deterministic:
      throw DomainError("Deterministic intervals have no density");
    case Kind::Uniform:
      return (tau >= p1_ && tau < p2_) ? 1.0 / (p2_ - p1_) : 0.0;
  }
  return 0;
}

double RenewalDistribution::survival(double tau) const {
  if (tau < 0) throw DomainError("survival: tau must be >= 0");
  switch (kind_) {
    case Kind::Exponential:
      return std::exp(-p1_ * tau);
    case Kind::Gamma:
      return boost::math::cdf(boost::math::complement(boost_gamma(p1_, p2_), tau));
    case Kind::LogNormal:
      return tau > 0
                 ? boost::math::cdf(boost::math::complement(boost_lognormal(p1_, p2_), tau))
                 : 1.0;
    case Kind::Deterministic:
      return tau < p1_ ? 1.0 : 0.0;
    case Kind::Uniform:
      if (tau <= p1_) return 1.0;
      if (tau >= p2_) return 0.0;
      return (p2_ - tau) / (p2_ - p1_);
  }
  return 0;
}

double RenewalDistribution::hazard(double tau) const {
  const double s = survival(tau);
  if (s <= 0.0)
    throw DomainError("hazard undefined where survival is zero");
  return pdf(tau) / s;
}

double RenewalDistribution::timer_density(double tau) const {
  if (tau < 0) throw DomainError("timer_density: tau must be >= 0");
  return survival(tau) / mean();
}

double RenewalDistribution::quantile(double q) const {
  if (!(q > 0) || !(q < 1)) throw DomainError("quantile: q must be in (0, 1)");
  switch (kind_) {
    case Kind::Exponential:
      return -std::log1p(-q) / p1_;
    case Kind::Gamma:
      return boost::math::quantile(boost_gamma(p1_, p2_), q);
    case Kind::LogNormal:
      return boost::math::quantile(boost_lognormal(p1_, p2_), q);
    case Kind::Deterministic:
      return p1_;
    case Kind::Uniform:
      return p1_ + q * (p2_ - p1_);
  }
  return 0;
}

RenewalDistribution RenewalDistribution::scaled_to_mean(double new_mean) const {
  if (!(new_mean > 0)) throw DomainError("scaled_to_mean: mean must be > 0");
  const double ratio = new_mean / mean();
  switch (kind_) {
    case Kind::Exponential: return exponential(p1_ / ratio);
    case Kind::Gamma: return gamma(p1_, p2_ * ratio);
    case Kind::LogNormal: return lognormal(p1_ + std::log(ratio), p2_);
    case Kind::Deterministic: return deterministic(new_mean);
    case Kind::Uniform: return uniform(p1_ * ratio, p2_ * ratio);
  }
  return *this;
}

double RenewalDistribution::sample(std::mt19937_64& rng) const {
  switch (kind_) {
    case Kind::Exponential:
      return std::exponential_distribution<double>(p1_)(rng);
    case Kind::Gamma:
      return std::gamma_distribution<double>(p1_, p2_)(rng);
    case Kind::LogNormal:
      return std::lognormal_distribution<double>(p1_, p2_)(rng);
    case Kind::Deterministic:
      return p1_;
    case Kind::Uniform:
      return std::uniform_real_distribution<double>(p1_, p2_)(rng);
  }
  return 0;
}

bool RenewalDistribution::bounded_support() const {
  return kind_ == Kind::Deterministic || kind_ == Kind::Uniform;
}

double RenewalDistribution::tail_rate() const {
  switch (kind_) {
    case Kind::Exponential: return p1_;
    case Kind::Gamma: return 1.0 / p2_;
    case Kind::LogNormal: return 0.0;
    case Kind::Deterministic:
    case Kind::Uniform: return kInf;
  }
  return 0;
}

void RenewalDistribution::check_existence(double alpha) const {
  if (bounded_support()) return;
  const double rate = tail_rate();
  if (rate == 0.0) {
    // Subexponential tail: any genuinely growing exponential wins.
    if (alpha > 0)
      throw DivergenceError("expectation diverges: e^{" + std::to_string(alpha) +
                            " tau} outgrows the " + name() + " tail");
    return;
  }
  if (alpha >= rate)
    throw DivergenceError("expectation diverges: eigenvalue real part " +
                          std::to_string(alpha) + " >= tail rate " +
                          std::to_string(rate));
}

double RenewalDistribution::truncation_point(double alpha,
                                             const QuadratureSpec& spec) const {
  if (bounded_support())
    return kind_ == Kind::Deterministic ? p1_ : p2_;
  double upper = quantile(spec.truncation_quantile);
  const double rate = tail_rate();
  if (rate > 0 && alpha > 0) {
    // Tail of f(tau) e^{alpha tau} decays like e^{-(rate-alpha) tau} times a
    // polynomial; push the cut until that envelope is negligible.
    const double gap = rate - alpha;
    const double log_eps = std::log(1e-16);
    const double poly = (kind_ == Kind::Gamma) ? std::max(p1_ - 1.0, 0.0) : 0.0;
    double u = -log_eps / gap;
    for (int i = 0; i < 4; ++i)
      u = (-log_eps + poly * std::log(std::max(u, 1.0))) / gap;
    upper = std::max(upper, u);
  }
  return upper;
}

Matrix RenewalDistribution::expect_matrix_exp(const Matrix& m, Measure measure,
                                              const QuadratureSpec& spec) const {
  if (m.rows() != m.cols())
    throw DimensionError("expect_matrix_exp requires a square matrix");
  require_finite(m, "expect_matrix_exp input");
  const double alpha = max_real_eigenvalue(m);
  check_existence(alpha);

  if (kind_ == Kind::Deterministic) {
    if (measure == Measure::Interval) return matrix_exp(m, p1_);
    return Matrix(integral_exp(m, p1_) / p1_);
  }

  const double upper = truncation_point(alpha, spec);
  const double mu = mean();
  auto weight = [this, mu, measure](double tau) {
    return measure == Measure::Interval ? pdf(tau) : survival(tau) / mu;
  };
  const double lo = (kind_ == Kind::Uniform && measure == Measure::Interval)
                        ? p1_
                        : 0.0;
  auto integrand = [&](double tau) -> Matrix {
    return weight(tau) * matrix_exp(m, tau);
  };
  return adaptive_integrate(integrand, lo, upper, spec).value;
}

Vector RenewalDistribution::expect_phi(const Matrix& a, const Vector& a_hat,
                                       Measure measure,
                                       const QuadratureSpec& spec) const {
  if (a.rows() != a.cols()) throw DimensionError("expect_phi: A must be square");
  if (a_hat.size() != a.rows())
    throw DimensionError("expect_phi: a_hat length mismatch");
  const double alpha = std::max(max_real_eigenvalue(a), 0.0);
  check_existence(alpha);

  if (kind_ == Kind::Deterministic && measure == Measure::Interval)
    return phi_flow(a, a_hat, p1_);

  const double upper = truncation_point(alpha, spec);
  const double mu = mean();
  auto weight = [this, mu, measure](double tau) {
    if (kind_ == Kind::Deterministic)  // timer measure only
      return tau < p1_ ? 1.0 / p1_ : 0.0;
    return measure == Measure::Interval ? pdf(tau) : survival(tau) / mu;
  };
  const double lo = (kind_ == Kind::Uniform && measure == Measure::Interval)
                        ? p1_
                        : 0.0;
  auto integrand = [&](double tau) -> Matrix {
    return weight(tau) * phi_flow(a, a_hat, tau);
  };
  return adaptive_integrate(integrand, lo, upper, spec).value;
}

double RenewalDistribution::expect_exp(double alpha,
                                       const QuadratureSpec& spec) const {
  Matrix m(1, 1);
  m(0, 0) = alpha;
  return expect_matrix_exp(m, Measure::Interval, spec)(0, 0);
}

}  // namespace ncs
