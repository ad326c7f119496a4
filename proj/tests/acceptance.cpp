// Acceptance suite: one pass/fail line per criterion, exit code = #failures.
//
// Closed-form reference values used below were re-derived symbolically and
// cross-checked against independent Monte Carlo simulation before being
// frozen here; see the oracle module for the formulas.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <vector>

#include "ncs/config.hpp"
#include "ncs/design.hpp"
#include "ncs/oracle.hpp"
#include "ncs/sim.hpp"

using namespace ncs;
using oracle::ScalarParams;

namespace {

int failures = 0;

void report(int index, bool ok, const std::string& name,
            const std::string& detail = "") {
  std::printf("[%s] %2d. %s%s%s\n", ok ? "PASS" : "FAIL", index, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++failures;
}

NCSModel reference_scalar(const RenewalDistribution& d) {
  return scalar_model(1.0, -1.0, 0.5, 0.45, 0.5, 1.0, d);
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const auto start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

// Random stable scalar model; the gain is resampled until both closed-form
// second-moment eigenvalues sit inside the unit circle.
ScalarParams random_stable_scalar(std::mt19937& rng,
                                  const RenewalDistribution& d) {
  std::uniform_real_distribution<double> ua(-2.0, -0.3), ub(0.3, 1.5),
      uc(0.2, 1.0), uk(-1.0, 1.0), us(0.2, 1.2), uh(-1.0, 1.0);
  for (;;) {
    ScalarParams p{uh(rng), ua(rng), ub(rng), uc(rng), uk(rng), us(rng)};
    if (std::abs(p.a + p.b * p.k) < 0.05) continue;
    try {
      const auto [l1, l2] = oracle::scalar_eigs(p, d);
      if (std::abs(l1) < 0.95 && std::abs(l2) < 0.95) return p;
    } catch (const Error&) {
    }
  }
}

// --- 1. Scalar oracle equivalence --------------------------------------

void criterion_1() {
  const double t0 = now_seconds();
  const std::vector<RenewalDistribution> laws = {
      RenewalDistribution::exponential(1.0),
      RenewalDistribution::gamma(2.0, 0.5),
      RenewalDistribution::deterministic(1.0),
  };
  std::mt19937 rng(101);
  bool ok = true;
  double worst_mean = 0.0, worst_var = 0.0;
  for (int trial = 0; trial < 20 && ok; ++trial) {
    for (const auto& d : laws) {
      const auto p = random_stable_scalar(rng, d);
      const auto model =
          scalar_model(p.a_hat, p.a, p.b, p.c, p.k, p.sigma, d);
      const auto rep = analyze(model);
      if (!rep.moments_valid) {
        ok = false;
        break;
      }
      const double mean_err = std::abs(rep.mean_x(0) - oracle::scalar_mean(p));
      const auto v = oracle::scalar_variance(p, d);
      const double var_err =
          std::abs(rep.covariance(0, 0) - v.total) / std::abs(v.total);
      worst_mean = std::max(worst_mean, mean_err);
      worst_var = std::max(worst_var, var_err);
      if (mean_err > 1e-8 || var_err > 1e-6) ok = false;
    }
  }
  const double elapsed = now_seconds() - t0;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "max |mean err| %.2e (tol 1e-8), max rel var err %.2e "
                "(tol 1e-6), %.1f s (limit 10 s)",
                worst_mean, worst_var, elapsed);
  report(1, ok && elapsed < 10.0,
         "scalar pipeline == closed-form oracle, 20 models x 3 laws", detail);
}

// --- 2. Mean invariance to the interval law ----------------------------

void criterion_2() {
  const std::vector<RenewalDistribution> laws = {
      RenewalDistribution::exponential(1.0),
      RenewalDistribution::gamma(2.0, 0.5),
      RenewalDistribution::deterministic(1.0),
      RenewalDistribution::uniform(0.4, 1.6),
  };
  double lo = 1e300, hi = -1e300;
  bool ok = true;
  for (const auto& d : laws) {
    const auto rep = analyze(reference_scalar(d));
    ok = ok && rep.moments_valid;
    lo = std::min(lo, rep.mean_x(0));
    hi = std::max(hi, rep.mean_x(0));
  }
  const double spread = hi - lo;
  ok = ok && spread <= 1e-8 && std::abs(lo - 4.0 / 3.0) <= 1e-8;
  char detail[120];
  std::snprintf(detail, sizeof(detail),
                "spread %.2e (tol 1e-8), mean %.12f (want 4/3)", spread, lo);
  report(2, ok, "steady mean 4/3 across 4 interval laws", detail);
}

// --- 3. Continuous-control limit ---------------------------------------

void criterion_3() {
  const auto rep = analyze(reference_scalar(RenewalDistribution::deterministic(1e-3)));
  // Always-connected closed loop: dx = (a+bk)x dt + c dw, stationary
  // variance c^2 / (2|a+bk|) = 0.135 (Monte-Carlo-confirmed; published
  // variants omitting the factor 2 are wrong).
  const double target = 0.45 * 0.45 / (2.0 * 0.75);
  const double rel = std::abs(rep.covariance(0, 0) - target) / target;
  char detail[120];
  std::snprintf(detail, sizeof(detail),
                "variance %.6f vs %.6f, rel err %.2e (tol 1e-2)",
                rep.covariance(0, 0), target, rel);
  report(3, rep.moments_valid && rel < 1e-2,
         "deterministic <T> = 1e-3 approaches the always-connected variance",
         detail);
}

// --- 4. a = 0 limit ----------------------------------------------------

void criterion_4() {
  std::mt19937 rng(404);
  std::uniform_real_distribution<double> ub(0.5, 1.5), uk(-0.8, -0.2),
      us(0.2, 1.0), uc(0.2, 1.0), ud(0.0, 1.0);
  bool ok = true;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    ScalarParams p;
    p.a_hat = 0.5;
    p.b = ub(rng);
    p.k = uk(rng);
    p.sigma = us(rng);
    p.c = uc(rng);
    const double pick = ud(rng);
    const auto d = pick < 0.33 ? RenewalDistribution::exponential(1.3)
                   : pick < 0.66
                       ? RenewalDistribution::gamma_mean_cv2(0.8, 0.6)
                       : RenewalDistribution::uniform(0.3, 1.2);
    ScalarParams limit = p;
    limit.a = 0.0;
    if (oracle::scalar_a0_eig(limit, d) >= 0.9) {
      --trial;  // keep a safe stability margin for the perturbed pipeline
      continue;
    }
    const auto v0 = oracle::scalar_a0_variance(limit, d);
    p.a = -1e-8;
    const auto model = scalar_model(p.a_hat, p.a, p.b, p.c, p.k, p.sigma, d);
    const auto rep = analyze(model);
    if (!rep.moments_valid) {
      ok = false;
      continue;
    }
    const double rel = std::abs(rep.covariance(0, 0) - v0.total) / v0.total;
    worst = std::max(worst, rel);
    if (rel > 1e-4) ok = false;
  }
  char detail[96];
  std::snprintf(detail, sizeof(detail), "max rel err %.2e (tol 1e-4)", worst);
  report(4, ok, "pipeline at a = -1e-8 matches the a = 0 closed form", detail);
}

// --- 5. Two-state means ------------------------------------------------

void criterion_5() {
  std::mt19937 rng(505);
  std::uniform_real_distribution<double> ua(0.5, 4.0), ug(0.5, 2.0),
      uk(0.0, 1.0);
  bool ok = true;
  double worst = 0.0;
  int accepted = 0;
  while (accepted < 10) {
    const double a1 = ua(rng), a2 = ug(rng), g1 = ug(rng), g2 = ug(rng);
    const double k1 = uk(rng), k2 = uk(rng), k3 = uk(rng);
    const auto model = two_state_model(a1, a2, g1, g2, k1, k2, k3,
                                       RenewalDistribution::exponential(2.0));
    const auto rep = analyze(model);
    if (!rep.moments_valid) continue;
    ++accepted;
    const double den = a2 * k2 + g1 * (g2 + k3) + g2 * k1 + k1 * k3;
    const double x1 = a1 * (g2 + k3) / den;
    const double x2 = a2 / (g2 + k3) * x1;
    const double err = std::max(std::abs(rep.mean_x(0) - x1),
                                std::abs(rep.mean_x(1) - x2));
    worst = std::max(worst, err);
    if (err > 1e-8) ok = false;
  }
  char detail[96];
  std::snprintf(detail, sizeof(detail), "max |err| %.2e (tol 1e-8)", worst);
  report(5, ok, "two-state means match the closed forms, 10 random sets",
         detail);
}

// --- 6. Monte Carlo agreement ------------------------------------------

void criterion_6() {
  const double t0 = now_seconds();
  const auto model = reference_scalar(RenewalDistribution::exponential(1.0));
  const auto rep = analyze(model);
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.trajectories = 1000;
  const auto mc = estimate(model, cfg);
  const double elapsed = now_seconds() - t0;
  const bool mean_in = std::abs(mc.mean_x(0) - rep.mean_x(0)) <= mc.ci95_mean(0);
  const bool var_in =
      std::abs(mc.var_x(0, 0) - rep.covariance(0, 0)) <= mc.ci95_var(0, 0);
  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "mean %.4f+-%.4f vs %.4f (%s), var %.4f+-%.4f vs %.4f (%s), "
                "%.0f s (limit 120 s)",
                mc.mean_x(0), mc.ci95_mean(0), rep.mean_x(0),
                mean_in ? "in" : "OUT", mc.var_x(0, 0), mc.ci95_var(0, 0),
                rep.covariance(0, 0), var_in ? "in" : "OUT", elapsed);
  report(6, mean_in && var_in && elapsed < 120.0,
         "1000-trajectory Monte Carlo covers the analytic moments", detail);
}

// --- 7. Qualitative sweep shapes ---------------------------------------

std::vector<std::vector<double>> csv_rows(const std::string& csv) {
  std::vector<std::vector<double>> rows;
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    std::vector<double> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) row.push_back(std::stod(field));
    rows.push_back(row);
  }
  return rows;
}

void criterion_7() {
  const auto model = reference_scalar(RenewalDistribution::exponential(1.0));
  SweepConfig mean_sweep;
  mean_sweep.parameter = SweepConfig::Parameter::MeanInterval;
  for (int i = 1; i <= 12; ++i) mean_sweep.values.push_back(0.15 * i);
  const auto rows_t = csv_rows(run_sweep(model, mean_sweep));

  // Columns: 0 sweep, 1 mean, 2 total, 3 channel, 4 disturbance.
  bool channel_up_t = true, disturbance_dips = false;
  for (size_t i = 1; i < rows_t.size(); ++i) {
    channel_up_t = channel_up_t && rows_t[i][3] > rows_t[i - 1][3];
    if (rows_t[i][4] < rows_t[i - 1][4] - 1e-12) disturbance_dips = true;
  }

  SweepConfig cv_sweep;
  cv_sweep.parameter = SweepConfig::Parameter::Cv2;
  for (int i = 0; i <= 10; ++i) cv_sweep.values.push_back(0.05 + 0.15 * i);
  const auto rows_cv = csv_rows(run_sweep(model, cv_sweep));
  bool channel_up_cv = true;
  for (size_t i = 1; i < rows_cv.size(); ++i)
    channel_up_cv = channel_up_cv && rows_cv[i][3] > rows_cv[i - 1][3];

  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "channel rising in <T>: %s, in CV2: %s, "
                "disturbance falls somewhere in <T>: %s",
                channel_up_t ? "yes" : "NO", channel_up_cv ? "yes" : "NO",
                disturbance_dips ? "yes" : "NO");
  report(7, channel_up_t && channel_up_cv && disturbance_dips,
         "sweep reproduces the qualitative variance trade-off", detail);
}

// --- 8. Stability boundary ---------------------------------------------

void criterion_8() {
  const double b = 1.0, mt = 1.0, cv2 = 0.5;
  const auto d = RenewalDistribution::gamma_mean_cv2(mt, cv2);
  // Closed-form crossing of b^2 k^2 T^2 cv2 + (bkT+1)^2 = 1 below k = 0.
  const double k_star = -2.0 / (b * mt * (1.0 + cv2));

  auto stable_at = [&](double k) {
    const auto model = scalar_model(0.0, 0.0, b, 0.4, k, 0.5, d);
    const auto sys1 = lift_first(model);
    const auto sys2 = lift_second(model);
    return stability(sys1, sys2, d).second_moment_stable;
  };
  double lo = k_star - 0.4, hi = k_star + 0.4;  // unstable .. stable
  bool bracket = !stable_at(lo) && stable_at(hi);
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    (stable_at(mid) ? hi : lo) = mid;
  }
  const double crossing = 0.5 * (lo + hi);
  const bool close = std::abs(crossing - k_star) <= 1e-6;

  // Monte Carlo divergence on either side of the boundary.
  auto divergent_fraction = [&](double k) {
    const auto model = scalar_model(0.0, 0.0, b, 0.4, k, 0.5, d);
    SimConfig cfg;
    cfg.dt = 2e-3;
    cfg.horizon = 400.0;
    cfg.burn_in = 200.0;
    cfg.trajectories = 60;
    int diverged = 0;
    for (int i = 0; i < cfg.trajectories; ++i)
      diverged += simulate_trajectory(model, cfg, i).diverged ? 1 : 0;
    return diverged / static_cast<double>(cfg.trajectories);
  };
  // Just past the moment boundary trajectories still converge almost surely
  // (negative Lyapunov exponent) while the second moment diverges; probe the
  // unstable side deep enough that E[ln|1+bkT|] > 0 and paths blow up too.
  const double frac_unstable = divergent_fraction(-4.0);
  const double frac_stable = divergent_fraction(0.5 * k_star);

  char detail[180];
  std::snprintf(detail, sizeof(detail),
                "crossing %.8f vs %.8f (|dk| %.1e, tol 1e-6); divergent "
                "%.0f%% unstable side (need >= 50), %.0f%% stable side "
                "(need <= 1)",
                crossing, k_star, std::abs(crossing - k_star),
                100 * frac_unstable, 100 * frac_stable);
  report(8,
         bracket && close && frac_unstable >= 0.5 && frac_stable <= 0.01,
         "stability verdict flips at the closed-form boundary", detail);
}

// --- 9. Design round-trip ----------------------------------------------

void criterion_9() {
  DesignProblem scalar_pb;
  scalar_pb.model_template = reference_scalar(RenewalDistribution::exponential(1.0));
  scalar_pb.model_template.reset.K(0, 0) = 0.1;
  scalar_pb.free_mask.setConstant(1, 1, true);
  scalar_pb.target_mean = Vector::Constant(1, 4.0 / 3.0);
  scalar_pb.mean_tolerance = 1e-12;
  const auto scalar_result = design_gain(scalar_pb);
  const bool scalar_ok = scalar_result.feasible &&
                         std::abs(scalar_result.K(0, 0) - 0.5) <= 1e-8;

  DesignProblem two_pb;
  two_pb.model_template = two_state_model(
      4.0, 1.0, 1.0, 1.0, 0.4, 0.1, 0.2, RenewalDistribution::exponential(2.0));
  two_pb.free_mask.setConstant(2, 2, false);
  two_pb.free_mask(0, 0) = two_pb.free_mask(0, 1) = two_pb.free_mask(1, 1) =
      true;
  two_pb.target_mean = Vector(2);
  two_pb.target_mean << 2.0, 1.5;
  two_pb.objective = DesignObjective::TraceCovariance;
  const auto two_result = design_gain(two_pb);
  bool two_ok = two_result.feasible &&
                std::abs(two_result.achieved_mean(0) - 2.0) <= 1e-6 &&
                std::abs(two_result.achieved_mean(1) - 1.5) <= 1e-6;

  // Optimality: 100 samples on the feasible manifold must not beat the
  // optimizer by more than 1e-6 relative. The manifold is re-entered by a
  // mean-only design restarted from each perturbed gain.
  std::mt19937 rng(909);
  std::normal_distribution<double> gauss(0.0, 0.3);
  double best_sample = two_result.objective_value;
  int sampled = 0;
  for (int trial = 0; trial < 300 && sampled < 100; ++trial) {
    DesignProblem sample_pb = two_pb;
    sample_pb.objective = DesignObjective::None;
    sample_pb.model_template.reset.K = two_result.K;
    sample_pb.model_template.reset.K(0, 0) += gauss(rng);
    sample_pb.model_template.reset.K(0, 1) += gauss(rng);
    sample_pb.model_template.reset.K(1, 1) += gauss(rng);
    try {
      const auto s = design_gain(sample_pb);
      if (!s.feasible) continue;
      ++sampled;
      const double obj = s.achieved_covariance.trace();
      best_sample = std::min(best_sample, obj);
    } catch (const Error&) {
    }
  }
  const double slack =
      (two_result.objective_value - best_sample) /
      std::max(1e-12, std::abs(two_result.objective_value));
  two_ok = two_ok && sampled == 100 && slack <= 1e-6;

  char detail[180];
  std::snprintf(detail, sizeof(detail),
                "scalar k %.10f (want 0.5); two-state objective %.6f, best of "
                "%d samples %.6f, rel slack %.1e (tol 1e-6)",
                scalar_result.K(0, 0), two_result.objective_value, sampled,
                best_sample, slack);
  report(9, scalar_ok && two_ok, "design round-trips and is near-optimal",
         detail);
}

// --- 10. Property suites ------------------------------------------------

void criterion_10() {
  bool ok = true;
  std::string why;

  // vec/Kronecker identity.
  {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto rnd = [&](int r, int c) {
      Matrix m(r, c);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = u(rng);
      return m;
    };
    const Matrix a = rnd(3, 4), x = rnd(4, 2), bm = rnd(2, 5);
    if ((vec(a * x * bm) - kron(bm.transpose(), a) * vec(x)).norm() > 1e-12) {
      ok = false;
      why += "vec/kron; ";
    }
  }
  // Timer-density normalization.
  {
    const auto d = RenewalDistribution::gamma(2.0, 0.5);
    QuadratureSpec spec;
    const auto r = adaptive_integrate(
        [&](double t) {
          Matrix m(1, 1);
          m(0, 0) = d.timer_density(t);
          return m;
        },
        d.quantile(1.0 - 1e-13), spec);
    if (std::abs(r.value(0, 0) - 1.0) > 1e-8) {
      ok = false;
      why += "timer norm; ";
    }
  }
  // Exponential resolvent.
  {
    const auto d = RenewalDistribution::exponential(2.0);
    Matrix m(2, 2);
    m << -0.5, 0.3, 0.2, -0.7;
    const Matrix expected = 2.0 * (2.0 * Matrix::Identity(2, 2) - m).inverse();
    if ((d.expect_matrix_exp(m, Measure::Interval) - expected).norm() > 1e-9) {
      ok = false;
      why += "resolvent; ";
    }
  }
  // Semigroup.
  {
    Matrix m(2, 2);
    m << 0.1, -0.4, 0.6, -0.2;
    if ((matrix_exp(m, 1.3) - matrix_exp(m, 0.8) * matrix_exp(m, 0.5)).norm() >
        1e-12) {
      ok = false;
      why += "semigroup; ";
    }
  }
  // Simulator bit-reproducibility under varying parallelism.
  {
    const auto model = reference_scalar(RenewalDistribution::exponential(1.0));
    SimConfig cfg;
    cfg.dt = 2e-3;
    cfg.horizon = 30.0;
    cfg.burn_in = 15.0;
    cfg.trajectories = 24;
    cfg.threads = 1;
    const auto one = estimate(model, cfg);
    cfg.threads = 4;
    const auto four = estimate(model, cfg);
    if (one.mean_x(0) != four.mean_x(0) ||
        one.var_x(0, 0) != four.var_x(0, 0)) {
      ok = false;
      why += "sim reproducibility; ";
    }
  }
  report(10, ok, "property suite (vec/kron, renewal, exp, simulator)",
         why.empty() ? "all 5 properties hold" : why);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures;
}
