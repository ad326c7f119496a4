#include "ncs/numerics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <queue>
#include <vector>

namespace ncs {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite())
    throw DomainError(std::string(what) + " contains NaN or Inf");
}

Matrix matrix_exp(const Matrix& m, double t) {
  if (m.rows() != m.cols())
    throw DimensionError("matrix_exp requires a square matrix");
  require_finite(m, "matrix_exp input");
  if (!std::isfinite(t)) throw DomainError("matrix_exp: t must be finite");
  if (t == 0.0) return Matrix::Identity(m.rows(), m.cols());
  return Matrix((m * t).exp());
}

Vector phi_flow(const Matrix& a, const Vector& a_hat, double tau) {
  const auto n = a.rows();
  if (a.cols() != n) throw DimensionError("phi_flow: A must be square");
  if (a_hat.size() != n) throw DimensionError("phi_flow: a_hat length mismatch");
  if (tau < 0) throw DomainError("phi_flow: tau must be >= 0");
  Matrix aug = Matrix::Zero(n + 1, n + 1);
  aug.topLeftCorner(n, n) = a;
  aug.topRightCorner(n, 1) = a_hat;
  return matrix_exp(aug, tau).topRightCorner(n, 1);
}

Matrix integral_exp(const Matrix& a, double tau) {
  const auto n = a.rows();
  if (a.cols() != n) throw DimensionError("integral_exp: A must be square");
  Matrix aug = Matrix::Zero(2 * n, 2 * n);
  aug.topLeftCorner(n, n) = a;
  aug.topRightCorner(n, n) = Matrix::Identity(n, n);
  return matrix_exp(aug, tau).topRightCorner(n, n);
}

double spectral_radius(const Matrix& m) {
  if (m.rows() != m.cols())
    throw DimensionError("spectral_radius requires a square matrix");
  require_finite(m, "spectral_radius input");
  Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double max_real_eigenvalue(const Matrix& m) {
  if (m.rows() != m.cols())
    throw DimensionError("max_real_eigenvalue requires a square matrix");
  Eigen::EigenSolver<Matrix> es(m, false);
  return es.eigenvalues().real().maxCoeff();
}

namespace {

// Gauss-Kronrod 7/15 nodes on [-1, 1] (positive half; rule is symmetric).
constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Segment {
  double lo, hi;
  Matrix value;  // K15 estimate
  double error;  // |K15 - G7| (entrywise max)
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment evaluate(const std::function<Matrix(double)>& g, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  Matrix k15, g7;
  bool first = true;
  for (int i = 0; i < 8; ++i) {
    Matrix sum;
    if (i == 7) {
      sum = g(center);
    } else {
      sum = g(center - half * kKronrodNodes[i]) +
            g(center + half * kKronrodNodes[i]);
    }
    if (first) {
      k15 = Matrix::Zero(sum.rows(), sum.cols());
      g7 = k15;
      first = false;
    }
    k15 += kKronrodWeights[i] * sum;
    if (i % 2 == 1) g7 += kGaussWeights[i / 2] * sum;
  }
  k15 *= half;
  g7 *= half;
  Segment s;
  s.lo = lo;
  s.hi = hi;
  s.value = k15;
  s.error = (k15 - g7).cwiseAbs().maxCoeff();
  return s;
}

}  // namespace

QuadratureResult adaptive_integrate(const std::function<Matrix(double)>& g,
                                    double lo, double hi,
                                    const QuadratureSpec& spec) {
  spec.check();
  if (!(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw DomainError("adaptive_integrate: bad interval");
  if (hi == lo) {
    Matrix probe = g(lo);
    return {Matrix::Zero(probe.rows(), probe.cols()), 0.0};
  }

  std::priority_queue<Segment> segments;
  // Seed with a few pieces so badly scaled integrands get noticed early.
  const int seed_pieces = 8;
  Matrix total;
  double total_error = 0.0;
  for (int i = 0; i < seed_pieces; ++i) {
    double a = lo + (hi - lo) * i / seed_pieces;
    double b = lo + (hi - lo) * (i + 1) / seed_pieces;
    Segment s = evaluate(g, a, b);
    require_finite(s.value, "adaptive_integrate segment");
    if (i == 0)
      total = s.value;
    else
      total += s.value;
    total_error += s.error;
    segments.push(std::move(s));
  }

  int subdivisions = seed_pieces;
  auto tolerance_met = [&]() {
    const double scale = total.cwiseAbs().maxCoeff();
    return total_error <=
           std::max(spec.absolute_tolerance, spec.relative_tolerance * scale);
  };

  while (!tolerance_met()) {
    if (subdivisions >= spec.max_subdivisions)
      throw NonConvergenceError(
          "adaptive_integrate: subdivision budget exhausted (error bound " +
              std::to_string(total_error) + ")",
          total_error);
    Segment worst = segments.top();
    segments.pop();
    total -= worst.value;
    total_error -= worst.error;
    const double mid = 0.5 * (worst.lo + worst.hi);
    for (Segment s : {evaluate(g, worst.lo, mid), evaluate(g, mid, worst.hi)}) {
      total += s.value;
      total_error += s.error;
      segments.push(std::move(s));
    }
    ++subdivisions;
  }
  return {total, total_error};
}

}  // namespace ncs
