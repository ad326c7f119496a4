#include "ncs/design.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace ncs {

double scalar_gain_for_mean(double a_hat, double a, double b, double x_bar) {
  if (b == 0.0 || x_bar == 0.0)
    throw DomainError("design: scalar gain needs b != 0 and x_bar != 0");
  return -(a_hat + a * x_bar) / (b * x_bar);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct FreeParam {
  Eigen::Index row, col;
};

std::vector<FreeParam> free_params(const DesignProblem& pb) {
  std::vector<FreeParam> out;
  for (Eigen::Index j = 0; j < pb.free_mask.cols(); ++j)
    for (Eigen::Index i = 0; i < pb.free_mask.rows(); ++i)
      if (pb.free_mask(i, j)) out.push_back({i, j});
  return out;
}

NCSModel with_gain(const DesignProblem& pb, const std::vector<FreeParam>& fp,
                   const Vector& theta) {
  NCSModel model = pb.model_template;
  for (size_t i = 0; i < fp.size(); ++i)
    model.reset.K(fp[i].row, fp[i].col) = theta(static_cast<Eigen::Index>(i));
  return model;
}

// Mean residual on the constrained components; +inf entries signal
// instability to the Newton driver.
Vector mean_residual(const DesignProblem& pb, const std::vector<FreeParam>& fp,
                     const std::vector<Eigen::Index>& constrained,
                     const Vector& theta) {
  const NCSModel model = with_gain(pb, fp, theta);
  Vector r(static_cast<Eigen::Index>(constrained.size()));
  try {
    const MomentReport rep = analyze(model, pb.quadrature);
    if (!rep.moments_valid) {
      r.setConstant(kInf);
      return r;
    }
    for (size_t i = 0; i < constrained.size(); ++i)
      r(static_cast<Eigen::Index>(i)) =
          rep.mean_x(constrained[i]) - pb.target_mean(constrained[i]);
  } catch (const Error&) {
    r.setConstant(kInf);
  }
  return r;
}

double objective_value(const DesignProblem& pb, const MomentReport& rep) {
  switch (pb.objective) {
    case DesignObjective::TraceCovariance:
      return rep.covariance.trace();
    case DesignObjective::ComponentVariance:
      return rep.covariance(pb.component_row, pb.component_col);
    case DesignObjective::None:
      return 0.0;
  }
  return 0.0;
}

// Penalized objective along the mean-preserving manifold.
double penalized_objective(const DesignProblem& pb,
                           const std::vector<FreeParam>& fp,
                           const Vector& theta) {
  const NCSModel model = with_gain(pb, fp, theta);
  try {
    const MomentReport rep = analyze(model, pb.quadrature);
    if (!rep.moments_valid) return kInf;
    for (Eigen::Index i = 0; i < pb.target_mean.size(); ++i) {
      if (std::isnan(pb.target_mean(i))) continue;
      if (std::abs(rep.mean_x(i) - pb.target_mean(i)) > 10 * pb.mean_tolerance)
        return kInf;
    }
    return objective_value(pb, rep);
  } catch (const Error&) {
    return kInf;
  }
}

}  // namespace

DesignResult design_gain(const DesignProblem& problem) {
  require_valid(problem.model_template);
  const auto& pb = problem;
  const auto n = pb.model_template.plant.n();
  const auto m = pb.model_template.plant.m();
  if (pb.free_mask.rows() != m || pb.free_mask.cols() != n)
    throw DimensionError("design: free_mask must be m x n");
  if (pb.target_mean.size() != n)
    throw DimensionError("design: target_mean must have length n");

  const auto fp = free_params(pb);
  if (fp.empty()) throw InfeasibleError("design: no free gain entries");

  std::vector<Eigen::Index> constrained;
  for (Eigen::Index i = 0; i < n; ++i)
    if (!std::isnan(pb.target_mean(i))) constrained.push_back(i);

  const auto nfree = static_cast<Eigen::Index>(fp.size());
  const auto ncon = static_cast<Eigen::Index>(constrained.size());
  if (ncon > nfree)
    throw InfeasibleError("design: more mean constraints than free gains");

  Vector theta(nfree);
  for (Eigen::Index i = 0; i < nfree; ++i)
    theta(i) = pb.model_template.reset.K(fp[i].row, fp[i].col);

  DesignResult result;
  Matrix jac(ncon, nfree);

  // Phase 1: damped Newton on the mean constraints.
  if (ncon > 0) {
    bool converged = false;
    Vector r = mean_residual(pb, fp, constrained, theta);
    for (int iter = 0; iter < 100; ++iter) {
      ++result.iterations;
      if (r.allFinite() && r.cwiseAbs().maxCoeff() < pb.mean_tolerance) {
        converged = true;
        break;
      }
      if (!r.allFinite() && iter == 0)
        throw InfeasibleError("design: initial gain yields unstable loop");
      for (Eigen::Index j = 0; j < nfree; ++j) {
        const double h = 1e-6 * (1.0 + std::abs(theta(j)));
        Vector tp = theta, tm = theta;
        tp(j) += h;
        tm(j) -= h;
        const Vector rp = mean_residual(pb, fp, constrained, tp);
        const Vector rm = mean_residual(pb, fp, constrained, tm);
        if (!rp.allFinite() || !rm.allFinite())
          throw InfeasibleError("design: stability boundary in Newton step");
        jac.col(j) = (rp - rm) / (2.0 * h);
      }
      Vector step =
          jac.completeOrthogonalDecomposition().solve(-r).eval();
      double damping = 1.0;
      Vector next = theta + step;
      Vector rn = mean_residual(pb, fp, constrained, next);
      while (damping > 1e-8 &&
             !(rn.allFinite() && rn.norm() < r.norm())) {
        damping *= 0.5;
        next = theta + damping * step;
        rn = mean_residual(pb, fp, constrained, next);
      }
      if (damping <= 1e-8)
        throw NonConvergenceError("design: Newton stalled", r.norm());
      theta = next;
      r = rn;
    }
    if (!converged)
      throw NonConvergenceError("design: mean constraint not met in 100 iters",
                                r.cwiseAbs().maxCoeff());
  }

  // Phase 2: minimize the variance objective over the Jacobian null space
  // via deterministic Nelder-Mead, re-projecting onto the mean manifold.
  if (pb.objective != DesignObjective::None && nfree > ncon) {
    Matrix null_basis;
    if (ncon > 0) {
      Eigen::JacobiSVD<Matrix> svd(jac, Eigen::ComputeFullV);
      null_basis = svd.matrixV().rightCols(nfree - ncon);
    } else {
      null_basis = Matrix::Identity(nfree, nfree);
    }
    const auto dim = null_basis.cols();

    auto project = [&](const Vector& th) {
      // Small Newton correction back onto the mean constraint.
      Vector t = th;
      if (ncon == 0) return t;
      for (int it = 0; it < 20; ++it) {
        const Vector r = mean_residual(pb, fp, constrained, t);
        if (!r.allFinite()) return Vector(t);
        if (r.cwiseAbs().maxCoeff() < pb.mean_tolerance) break;
        t -= jac.completeOrthogonalDecomposition().solve(r).eval();
      }
      return t;
    };
    auto eval = [&](const Vector& z) {
      const Vector t = project(theta + null_basis * z);
      return penalized_objective(pb, fp, t);
    };

    std::vector<Vector> simplex;
    std::vector<double> f;
    simplex.push_back(Vector::Zero(dim));
    f.push_back(eval(simplex[0]));
    for (Eigen::Index j = 0; j < dim; ++j) {
      Vector v = Vector::Zero(dim);
      v(j) = 0.25;
      double fv = eval(v);
      if (!std::isfinite(fv)) {
        v(j) = -0.25;
        fv = eval(v);
      }
      simplex.push_back(v);
      f.push_back(fv);
    }
    const int npts = static_cast<int>(simplex.size());
    for (int iter = 0; iter < 200; ++iter) {
      ++result.iterations;
      std::vector<int> order(npts);
      for (int i = 0; i < npts; ++i) order[i] = i;
      std::sort(order.begin(), order.end(),
                [&](int a, int b) { return f[a] < f[b]; });
      const int best = order.front(), worst = order.back();
      double spread = 0.0;
      for (int i : order)
        spread = std::max(spread, (simplex[i] - simplex[best]).norm());
      if (spread < 1e-8) break;
      Vector centroid = Vector::Zero(dim);
      for (int i : order)
        if (i != worst) centroid += simplex[i];
      centroid /= static_cast<double>(npts - 1);
      const Vector refl = centroid + (centroid - simplex[worst]);
      const double fr = eval(refl);
      if (fr < f[best]) {
        const Vector exp_pt = centroid + 2.0 * (centroid - simplex[worst]);
        const double fe = eval(exp_pt);
        if (fe < fr) {
          simplex[worst] = exp_pt;
          f[worst] = fe;
        } else {
          simplex[worst] = refl;
          f[worst] = fr;
        }
      } else if (fr < f[order[npts - 2]]) {
        simplex[worst] = refl;
        f[worst] = fr;
      } else {
        const Vector con = centroid + 0.5 * (simplex[worst] - centroid);
        const double fc = eval(con);
        if (fc < f[worst]) {
          simplex[worst] = con;
          f[worst] = fc;
        } else {
          for (int i : order)
            if (i != best) {
              simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
              f[i] = eval(simplex[i]);
            }
        }
      }
    }
    int best = 0;
    for (int i = 1; i < npts; ++i)
      if (f[i] < f[best]) best = i;
    theta = project(theta + null_basis * simplex[best]);
  }

  const NCSModel final_model = with_gain(pb, fp, theta);
  const MomentReport rep = analyze(final_model, pb.quadrature);
  result.K = final_model.reset.K;
  result.stability = rep.stability;
  if (!rep.moments_valid)
    throw InfeasibleError("design: final gain is not moment-stable");
  result.achieved_mean = rep.mean_x;
  result.achieved_covariance = rep.covariance;
  result.objective_value = objective_value(pb, rep);
  result.feasible = true;
  for (Eigen::Index i : constrained)
    if (std::abs(rep.mean_x(i) - pb.target_mean(i)) > pb.mean_tolerance)
      result.feasible = false;
  return result;
}

}  // namespace ncs
