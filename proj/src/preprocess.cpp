#include "blx/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "blx/errors.hpp"

namespace blx {

std::string_view to_string(BoundaryPolicy policy) noexcept {
  switch (policy) {
    case BoundaryPolicy::replicate_first_full: return "replicate-first-full";
    case BoundaryPolicy::shrink_window: return "shrink-window";
  }
  return "unknown";
}

BoundaryPolicy parse_boundary_policy(std::string_view text) {
  if (text == "replicate-first-full") return BoundaryPolicy::replicate_first_full;
  if (text == "shrink-window") return BoundaryPolicy::shrink_window;
  throw std::invalid_argument("unknown boundary policy: " + std::string(text));
}

Series moving_average(const Series& data, const MovingAverageConfig& config) {
  if (config.width < 1 || config.width % 2 == 0) {
    throw std::invalid_argument("moving average width must be odd and >= 1");
  }
  const std::size_t width = static_cast<std::size_t>(config.width);
  const std::size_t n = data.size();
  if (n < width) {
    throw SeriesTooShort("moving average of width " + std::to_string(width) +
                         " needs at least that many points, got " + std::to_string(n));
  }
  const std::size_t half = width / 2;
  auto z = data.values();
  auto window_mean = [&](std::size_t lo, std::size_t hi) {  // inclusive, ascending sum
    double acc = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) acc += z[i];
    return acc / static_cast<double>(hi - lo + 1);
  };

  std::vector<double> out(n);
  for (std::size_t p = half; p + half < n; ++p) out[p] = window_mean(p - half, p + half);
  for (std::size_t p = 0; p < half; ++p) {
    const std::size_t tail = n - 1 - p;
    if (config.boundary == BoundaryPolicy::replicate_first_full) {
      out[p] = out[half];
      out[tail] = out[n - 1 - half];
    } else {
      out[p] = window_mean(0, p + half);
      out[tail] = window_mean(tail - half, n - 1);
    }
  }
  return Series(data.start(), std::move(out));
}

LevelCorrection LevelCorrection::parse(std::string_view text) {
  LevelCorrection out;
  if (text == "fixed") return {true, ForecastShift::last_mv};
  std::size_t pos = 0;
  bool forecast_set = false;
  while (pos <= text.size()) {
    const std::size_t plus = std::min(text.find('+', pos), text.size());
    const std::string_view part = text.substr(pos, plus - pos);
    if (part == "none") {
    } else if (part == "historical-rebase") {
      out.historical_rebase = true;
    } else if (part == "last-mv" || part == "mean-last-5-mv") {
      if (forecast_set) throw std::invalid_argument("only one forecast shift may be given");
      out.forecast = part == "last-mv" ? ForecastShift::last_mv : ForecastShift::mean_last_5_mv;
      forecast_set = true;
    } else {
      throw std::invalid_argument("unknown level correction: " + std::string(part));
    }
    pos = plus + 1;
  }
  return out;
}

std::string LevelCorrection::to_string() const {
  std::string out;
  if (historical_rebase) out = "historical-rebase";
  if (forecast != ForecastShift::none) {
    if (!out.empty()) out += '+';
    out += forecast == ForecastShift::last_mv ? "last-mv" : "mean-last-5-mv";
  }
  return out.empty() ? "none" : out;
}

FittedExtrapolator level_correct(const FittedExtrapolator& model, const Series& history_mv,
                                 const Series& raw, const LevelCorrection& mode) {
  const Window& w = model.window();
  double history = 0.0;
  double forecast = 0.0;
  if (mode.historical_rebase) {
    if (!raw.covers(w)) throw WindowNotCovered("raw series does not cover the fitted window");
    double total = 0.0;
    for (Time t = w.q(); t <= w.s(); ++t) total += std::fabs(raw.at(t) - model.raw(t));
    history = total / static_cast<double>(w.length());
  }
  if (mode.forecast != ForecastShift::none) {
    if (!history_mv.covers(w.s(), w.s())) {
      throw WindowNotCovered("moving average does not reach the window end");
    }
    if (mode.forecast == ForecastShift::last_mv) {
      forecast = history_mv.at(w.s());
    } else {
      // Windows shorter than five points average what they have.
      const Time from = std::max({w.s() - 4, w.q(), history_mv.start()});
      double total = 0.0;
      for (Time t = from; t <= w.s(); ++t) total += history_mv.at(t);
      forecast = total / static_cast<double>(w.s() - from + 1);
    }
  }
  return model.with_level_shifts(history, forecast);
}

}  // namespace blx
