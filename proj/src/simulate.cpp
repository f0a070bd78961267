#include "blx/simulate.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "blx/simd/kernels.hpp"

namespace blx {

void SimConfig::validate() const {
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
  if (!(coeff_low <= coeff_high)) throw std::invalid_argument("coeff_low must be <= coeff_high");
  if (path_length < 1) throw std::invalid_argument("path_length must be >= 1");
  if (!std::isfinite(z0)) throw std::invalid_argument("z0 must be finite");
}

PathRng::PathRng(std::uint64_t seed) : engine_(seed) {}

double PathRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double PathRng::normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Series gen_path(const SimConfig& config, Time start) {
  config.validate();
  PathRng rng(config.seed);
  std::vector<double> z(static_cast<std::size_t>(config.path_length));
  double prev = config.z0;
  for (double& v : z) {
    const double a = rng.uniform(config.coeff_low, config.coeff_high);
    const double eta = rng.normal();
    prev = a * prev + config.sigma * eta;
    v = prev;
  }
  return Series(start, std::move(z));
}

TrialResult run_trial(const WindowFitter& fitter, const SimConfig& sim, std::uint64_t index,
                      int horizon, const MovingAverageConfig& ma) {
  const Window& w = fitter.window();
  SimConfig trial_cfg = sim;
  trial_cfg.seed = sim.seed ^ index;
  trial_cfg.path_length = static_cast<int>(w.length()) + horizon;
  const Series path = gen_path(trial_cfg, w.q());
  const Series mv = moving_average(path, ma);
  const FittedExtrapolator model = fitter.fit(mv);

  TrialResult out;
  const auto& kern = simd::active_kernels();
  const auto& atoms = fitter.atoms();
  const Coefficients& y = model.coefficients();
  // On-window values via the cached atoms: x(t) = sum_k y_k atom_k(t).
  std::vector<double> fitted(w.length(), 0.0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const auto row = atoms.mode_row(i);
    for (std::size_t j = 0; j < row.size(); ++j) fitted[j] += y[i] * row[j];
  }
  const double* z = path.values().data();
  out.smoothing_abs = kern.sum_abs_diff(fitted.data(), z, w.length());
  out.smoothing_sq = kern.sum_sq_diff(fitted.data(), z, w.length());
  out.abs_error.resize(static_cast<std::size_t>(horizon));
  out.sq_error.resize(static_cast<std::size_t>(horizon));
  for (int h = 1; h <= horizon; ++h) {
    const double d = model.evaluate(w.s() + h) - path.at(w.s() + h);
    out.abs_error[static_cast<std::size_t>(h - 1)] = std::fabs(d);
    out.sq_error[static_cast<std::size_t>(h - 1)] = d * d;
  }
  return out;
}

TrialAggregate aggregate_trials(std::span<const TrialResult> trials, std::size_t window_length) {
  TrialAggregate agg;
  agg.n_trials = static_cast<int>(trials.size());
  if (trials.empty()) return agg;
  const std::size_t horizon = trials.front().abs_error.size();
  agg.per_point.assign(horizon, 0.0);
  agg.per_point_squared.assign(horizon, 0.0);
  for (const TrialResult& r : trials) {
    if (r.abs_error.size() != horizon) throw std::invalid_argument("trial horizons differ");
    for (std::size_t h = 0; h < horizon; ++h) {
      agg.per_point[h] += r.abs_error[h];
      agg.per_point_squared[h] += r.sq_error[h];
    }
    agg.smoothing_total += r.smoothing_abs;
    agg.smoothing_total_squared += r.smoothing_sq;
  }
  const double n = static_cast<double>(trials.size());
  for (std::size_t h = 0; h < horizon; ++h) {
    agg.per_point[h] /= n;
    agg.per_point_squared[h] /= n;
    agg.extrap_total += agg.per_point[h];
  }
  agg.smoothing_total /= n;
  agg.smoothing_total_squared /= n;
  agg.smoothing_per_point = window_length == 0 ? 0.0 : agg.smoothing_total / static_cast<double>(window_length);
  agg.extrap_per_point = horizon == 0 ? 0.0 : agg.extrap_total / static_cast<double>(horizon);
  return agg;
}

int resolve_threads(int requested) {
  int threads = requested;
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("BLX_THREADS")) {
      const int v = std::atoi(cap);
      if (v > 0) threads = v;
    }
  }
  return threads < 1 ? 1 : threads;
}

TrialAggregate run_trials(int n_trials, const SimConfig& sim, const BandParams& band,
                          const Window& window, int horizon, const MovingAverageConfig& ma,
                          const TrialOptions& options) {
  if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  sim.validate();
  const WindowFitter fitter(band, window);

  std::vector<TrialResult> results(static_cast<std::size_t>(n_trials));
  const int threads = std::min(resolve_threads(options.threads), n_trials);
  auto work = [&](int worker) {
    for (int i = worker; i < n_trials; i += threads) {
      results[static_cast<std::size_t>(i)] =
          run_trial(fitter, sim, static_cast<std::uint64_t>(i), horizon, ma);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  return aggregate_trials(results, window.length());
}

}  // namespace blx
