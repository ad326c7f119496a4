#include "ncs/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>
#include <vector>

namespace ncs {

namespace {
constexpr double kDivergenceNorm = 1e12;
}

SimConfig SimConfig::resolved(const NCSModel& model) const {
  SimConfig out = *this;
  const double mean_interval = model.intervals.mean();
  if (out.horizon < 0) out.horizon = 200.0 * mean_interval;
  if (out.burn_in < 0) out.burn_in = 0.5 * out.horizon;
  if (!(out.dt > 0)) throw DomainError("sim: dt must be > 0");
  if (!(out.burn_in < out.horizon))
    throw DomainError("sim: burn_in must be < horizon");
  if (out.trajectories < 1) throw DomainError("sim: trajectories must be >= 1");
  if (out.record_stride < 1) throw DomainError("sim: record_stride must be >= 1");
  return out;
}

TrajectoryStats simulate_trajectory(const NCSModel& model, const SimConfig& raw,
                                    int trajectory_index) {
  require_valid(model);
  const SimConfig cfg = raw.resolved(model);
  const auto& p = model.plant;
  const auto n = p.n();
  const auto m = p.m();

  std::seed_seq seq{cfg.seed, static_cast<std::uint64_t>(trajectory_index)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const Vector eta_scale = model.reset.Sigma.diagonal().cwiseSqrt();

  Vector x = Vector::Zero(n);
  Vector u = Vector::Zero(m);
  Vector xi(n);

  TrajectoryStats stats;
  stats.mean_x = Vector::Zero(n);
  stats.second_x = Matrix::Zero(n, n);

  double t = 0.0;
  double next_reset = model.intervals.sample(rng);
  long samples = 0;
  long step_index = 0;
  const double sqrt_dt_full = std::sqrt(cfg.dt);

  while (t < cfg.horizon) {
    double h = std::min(cfg.dt, cfg.horizon - t);
    bool reset_now = false;
    if (next_reset <= t + h) {
      h = next_reset - t;  // split the straddling step
      reset_now = true;
    }
    if (h > 0) {
      for (Eigen::Index i = 0; i < n; ++i) xi(i) = gauss(rng);
      const double sqrt_h = (h == cfg.dt) ? sqrt_dt_full : std::sqrt(h);
      const Matrix diffusion = p.C + p.D * x * Eigen::RowVectorXd::Ones(n);
      x += (p.a_hat + p.A * x + p.B * u) * h + diffusion * (sqrt_h * xi);
      t += h;
    } else {
      t = next_reset;
    }
    if (reset_now) {
      u = model.reset.K * x;
      for (Eigen::Index i = 0; i < m; ++i)
        if (eta_scale(i) > 0) u(i) += eta_scale(i) * gauss(rng);
      ++stats.reset_count;
      next_reset = t + model.intervals.sample(rng);
    }
    if (x.cwiseAbs().maxCoeff() > kDivergenceNorm || !x.allFinite()) {
      stats.diverged = true;
      break;
    }
    ++step_index;
    if (t > cfg.burn_in && step_index % cfg.record_stride == 0) {
      stats.mean_x += x;
      stats.second_x += x * x.transpose();
      ++samples;
    }
  }
  stats.elapsed = t;
  if (samples > 0) {
    stats.mean_x /= static_cast<double>(samples);
    stats.second_x /= static_cast<double>(samples);
  }
  return stats;
}

EnsembleStats estimate(const NCSModel& model, const SimConfig& raw) {
  require_valid(model);
  const SimConfig cfg = raw.resolved(model);
  const int total = cfg.trajectories;
  std::vector<TrajectoryStats> results(total);

  int threads = cfg.threads > 0
                    ? cfg.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, total);

  if (threads == 1) {
    for (int i = 0; i < total; ++i)
      results[i] = simulate_trajectory(model, cfg, i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (int i = w; i < total; i += threads)
          results[i] = simulate_trajectory(model, cfg, i);
      });
    }
    for (auto& th : pool) th.join();
  }

  const auto n = model.plant.n();
  EnsembleStats out;
  out.mean_x = Vector::Zero(n);
  out.var_x = Matrix::Zero(n, n);
  out.ci95_mean = Vector::Zero(n);
  out.ci95_var = Matrix::Zero(n, n);

  long resets = 0;
  double reset_time = 0.0;
  std::vector<const TrajectoryStats*> good;
  good.reserve(total);
  for (const auto& r : results) {
    if (r.diverged) {
      ++out.divergent;
      continue;
    }
    good.push_back(&r);
    resets += r.reset_count;
    reset_time += r.elapsed;
  }
  if (out.divergent * 10 > total)
    throw InstabilityError("simulation: " + std::to_string(out.divergent) +
                               " of " + std::to_string(total) +
                               " trajectories diverged",
                           std::numeric_limits<double>::infinity());
  out.effective_samples = static_cast<int>(good.size());
  if (good.empty()) return out;
  out.mean_interval_observed = resets > 0 ? reset_time / resets : 0.0;

  const double count = static_cast<double>(good.size());
  Matrix second = Matrix::Zero(n, n);
  for (const auto* r : good) {
    out.mean_x += r->mean_x;
    second += r->second_x;
  }
  out.mean_x /= count;
  second /= count;

  // Variance via the grand mean: w_i = s_i - mbar m_i^T - m_i mbar^T
  // + mbar mbar^T averages to <xx^T> - mbar mbar^T exactly, avoiding the
  // O(tau_corr / window) bias of per-trajectory centering. CIs come from
  // the spread of the w_i across trajectories.
  Vector sq_mean = Vector::Zero(n);
  Matrix sq_var = Matrix::Zero(n, n);
  const Matrix mm = out.mean_x * out.mean_x.transpose();
  auto linearized = [&](const TrajectoryStats& r) {
    const Matrix cross = out.mean_x * r.mean_x.transpose();
    return Matrix(r.second_x - cross - cross.transpose() + mm);
  };
  for (const auto* r : good) {
    const Vector dm = r->mean_x - out.mean_x;
    sq_mean += dm.cwiseProduct(dm);
    out.var_x += linearized(*r);
  }
  out.var_x /= count;
  for (const auto* r : good) {
    const Matrix dv = linearized(*r) - out.var_x;
    sq_var += dv.cwiseProduct(dv);
  }
  if (good.size() > 1) {
    out.ci95_mean =
        1.959963985 * (sq_mean / (count * (count - 1.0))).cwiseSqrt();
    out.ci95_var = 1.959963985 * (sq_var / (count * (count - 1.0))).cwiseSqrt();
  }
  return out;
}

}  // namespace ncs
