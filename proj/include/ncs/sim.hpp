#pragma once

#include <cstdint>

#include "ncs/model.hpp"

namespace ncs {

struct SimConfig {
  double dt = 1e-3;
  double horizon = -1.0;   // < 0: 200 * <T_s>
  double burn_in = -1.0;   // < 0: horizon / 2
  int trajectories = 1000;
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
  int record_stride = 10;
  int threads = 0;  // 0: hardware concurrency

  /// Defaults resolved against a concrete model (mean interval).
  SimConfig resolved(const NCSModel& model) const;
};

/// Per-trajectory time averages over the post-burn-in window.
struct TrajectoryStats {
  Vector mean_x;    // time-averaged x
  Matrix second_x;  // time-averaged x x^T
  bool diverged = false;
  long reset_count = 0;
  double elapsed = 0.0;  // simulated time (full horizon unless diverged)
};

struct EnsembleStats {
  Vector mean_x;
  Matrix var_x;
  Vector ci95_mean;  // half-width, across trajectory-level averages
  Matrix ci95_var;
  int effective_samples = 0;
  int divergent = 0;
  double mean_interval_observed = 0.0;
};

/// Euler-Maruyama between renewal-sampled resets; reset instants are hit
/// exactly (the straddling step is split). Deterministic in
/// (cfg.seed, trajectory_index).
TrajectoryStats simulate_trajectory(const NCSModel& model, const SimConfig& cfg,
                                    int trajectory_index);

/// Ensemble aggregate; bit-reproducible for any thread count (fixed
/// per-trajectory substreams, reduction in index order). Aborts with
/// InstabilityError when more than 10% of trajectories diverge.
EnsembleStats estimate(const NCSModel& model, const SimConfig& cfg);

}  // namespace ncs
