#pragma once

// Monte Carlo test process z(t) = A(t) z(t-1) + sigma * eta(t) with A(t)
// uniform and eta(t) standard normal, plus the trial loop that measures how
// far a band-limited fit of its moving average extrapolates.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "blx/bandlimit.hpp"
#include "blx/preprocess.hpp"

namespace blx {

struct SimConfig {
  double sigma = 1.0;
  double coeff_low = 0.0;
  double coeff_high = 1.0;
  double z0 = 1.0;
  int path_length = 111;
  std::uint64_t seed = 42;

  void validate() const;
};

/// Random stream used by the simulator (stream version 1).
///
/// std::mt19937_64 seeded with a single 64-bit value. uniform() is
/// (next >> 11) * 2^-53 in [0, 1); normal() is the cosine branch of
/// Box-Muller on u1 = 1 - uniform() then u2 = uniform(). Both are spelled out
/// because the std distributions are implementation-defined.
class PathRng {
 public:
  static constexpr int stream_version = 1;

  explicit PathRng(std::uint64_t seed);
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// Path of config.path_length samples starting at `start`. Each step draws
/// one uniform A(t) and then one normal eta(t).
Series gen_path(const SimConfig& config, Time start = 0);

struct TrialResult {
  std::vector<double> abs_error;  // |x(s+h) - z(s+h)|, h = 1..horizon
  std::vector<double> sq_error;
  double smoothing_abs = 0.0;  // sum over the window of |x(t) - z(t)|
  double smoothing_sq = 0.0;
};

struct TrialAggregate {
  std::vector<double> per_point;          // mean |error| at s+1 .. s+horizon
  std::vector<double> per_point_squared;  // mean squared error at the same points
  double smoothing_total = 0.0;           // mean over trials of the on-window sum
  double smoothing_per_point = 0.0;
  double smoothing_total_squared = 0.0;
  double extrap_total = 0.0;  // sum of per_point
  double extrap_per_point = 0.0;
  int n_trials = 0;
};

struct TrialOptions {
  int threads = 0;  // 0: BLX_THREADS if set, otherwise hardware concurrency
};

/// One trial: trial i uses seed ^ i. The path holds window.length() + horizon
/// samples starting at window.q(). The moving average runs over the whole
/// path, so the last (width-1)/2 window points average samples past s. Errors
/// are measured against the raw path.
TrialResult run_trial(const WindowFitter& fitter, const SimConfig& sim, std::uint64_t index,
                      int horizon, const MovingAverageConfig& ma);

/// Means over trials, reduced in the order given.
TrialAggregate aggregate_trials(std::span<const TrialResult> trials, std::size_t window_length);

TrialAggregate run_trials(int n_trials, const SimConfig& sim, const BandParams& band,
                          const Window& window, int horizon, const MovingAverageConfig& ma,
                          const TrialOptions& options = {});

/// Worker count honoring BLX_THREADS.
int resolve_threads(int requested);

}  // namespace blx
