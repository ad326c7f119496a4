#pragma once

#include <stdexcept>
#include <string>

namespace ncs {

enum class ErrorCode {
  Dimension = 1,
  Domain = 2,
  Divergence = 3,
  NonConvergence = 4,
  Unstable = 5,
  Infeasible = 6,
  InvalidModel = 7,
  Parse = 8,
  Internal = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct DimensionError : Error {
  explicit DimensionError(const std::string& w) : Error(ErrorCode::Dimension, w) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorCode::Domain, w) {}
};

/// The requested renewal expectation does not exist (integrand outgrows the tail).
struct DivergenceError : Error {
  explicit DivergenceError(const std::string& w) : Error(ErrorCode::Divergence, w) {}
};

/// Quadrature failed to meet its tolerance; carries the best estimate's error bound.
struct NonConvergenceError : Error {
  NonConvergenceError(const std::string& w, double error_bound)
      : Error(ErrorCode::NonConvergence, w), error_bound(error_bound) {}
  double error_bound;
};

/// A steady-state quantity was requested for a model whose moments are unbounded.
struct InstabilityError : Error {
  InstabilityError(const std::string& w, double spectral_radius)
      : Error(ErrorCode::Unstable, w), spectral_radius(spectral_radius) {}
  double spectral_radius;
};

struct InfeasibleError : Error {
  explicit InfeasibleError(const std::string& w) : Error(ErrorCode::Infeasible, w) {}
};

struct InvalidModelError : Error {
  explicit InvalidModelError(const std::string& w) : Error(ErrorCode::InvalidModel, w) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& w) : Error(ErrorCode::Parse, w) {}
};

}  // namespace ncs
