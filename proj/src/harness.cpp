#include "blx/harness.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "blx/errors.hpp"

namespace blx {

std::string_view to_string(Overlap overlap) noexcept {
  return overlap == Overlap::none ? "none" : "skip-first-horizon";
}

Overlap parse_overlap(std::string_view text) {
  if (text == "none") return Overlap::none;
  if (text == "skip-first-horizon") return Overlap::skip_first_horizon;
  throw std::invalid_argument("unknown overlap mode: " + std::string(text));
}

std::string_view to_string(Metric metric) noexcept {
  return metric == Metric::abs ? "abs" : "squared";
}

Metric parse_metric(std::string_view text) {
  if (text == "abs") return Metric::abs;
  if (text == "squared") return Metric::squared;
  throw std::invalid_argument("unknown metric: " + std::string(text));
}

void ExperimentConfig::validate() const {
  band.validate();
  if (window_len < 1) throw std::invalid_argument("window_len must be >= 1");
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  if (burn_in < 0) throw std::invalid_argument("burn_in must be >= 0");
  if (baseline && baseline->lookback < 1) throw std::invalid_argument("lookback must be >= 1");
}

ResidualReport residual_metrics(const Series& pred, const Series& actual, Metric metric,
                                std::string label) {
  if (pred.size() != actual.size() || pred.start() != actual.start()) {
    throw LengthMismatch("prediction and actual series are not aligned (" +
                         std::to_string(pred.size()) + " vs " + std::to_string(actual.size()) +
                         " points)");
  }
  ResidualReport r;
  r.label = std::move(label);
  r.metric = metric;
  r.per_point.reserve(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - actual[i];
    const double v = metric == Metric::abs ? std::fabs(d) : d * d;
    r.per_point.push_back(v);
    r.total += v;
  }
  r.n_points = static_cast<int>(pred.size());
  r.mean = r.n_points == 0 ? 0.0 : r.total / r.n_points;
  return r;
}

ComparisonReport compare(const ResidualReport& causal, const ResidualReport& linear) {
  if (causal.metric != linear.metric) throw IncomparableReports("reports use different metrics");
  if (causal.n_points != linear.n_points) {
    throw IncomparableReports("reports cover different numbers of points");
  }
  ComparisonReport out{causal, linear, "tie", 0.0};
  if (causal.mean < linear.mean) {
    out.winner = "causal";
  } else if (linear.mean < causal.mean) {
    out.winner = "linear";
  }
  out.margin_per_point = std::fabs(causal.mean - linear.mean);
  return out;
}

namespace {

struct WindowForecast {
  FittedExtrapolator model;
  Series mv;
};

// Everything here reads only data on [s - window_len + 1, s].
WindowForecast fit_window(const Series& data, Time s, const ExperimentConfig& config) {
  const Window window(s - config.window_len + 1, s);
  const Series raw = data.slice(window.q(), window.s());
  Series mv = moving_average(raw, config.ma);
  FittedExtrapolator model = fit(config.band, window, mv);
  if (!config.correction.is_none()) model = level_correct(model, mv, raw, config.correction);
  return {std::move(model), std::move(mv)};
}

Series drop_burn_in(const Series& s, int burn_in) {
  if (burn_in <= 0) return s;
  if (static_cast<std::size_t>(burn_in) >= s.size()) return Series(s.last() + 1, {});
  return s.slice(s.start() + burn_in, s.last());
}

}  // namespace

ForecastResult run_single_forecast(const Series& data, const ExperimentConfig& config) {
  config.validate();
  const std::size_t needed = static_cast<std::size_t>(config.window_len + config.horizon);
  if (data.size() < needed) {
    throw SeriesTooShort("single forecast needs " + std::to_string(needed) + " points, got " +
                         std::to_string(data.size()));
  }
  const Time s = data.start() + config.window_len - 1;
  WindowForecast wf = fit_window(data, s, config);
  const Window& w = wf.model.window();

  Series history_fit(w.q(), wf.model.evaluate(w.q(), w.s()));
  Series forecast(s + 1, wf.model.evaluate(s + 1, s + config.horizon));
  Series actual = data.slice(s + 1, s + config.horizon);

  ForecastResult out{wf.model,
                     wf.mv,
                     history_fit,
                     forecast,
                     actual,
                     std::nullopt,
                     residual_metrics(drop_burn_in(forecast, config.burn_in),
                                      drop_burn_in(actual, config.burn_in), Metric::abs, "causal"),
                     residual_metrics(history_fit, data.slice(w.q(), w.s()), Metric::abs,
                                      "historical"),
                     std::nullopt};
  if (config.baseline) {
    Series linear = linear_forecast(data, s, *config.baseline, config.horizon);
    out.linear_report = residual_metrics(drop_burn_in(linear, config.burn_in),
                                         drop_burn_in(actual, config.burn_in), Metric::abs,
                                         "linear");
    out.linear = std::move(linear);
  }
  return out;
}

std::size_t rolling_points_required(const ExperimentConfig& config) {
  const int blocks = config.repetitions + (config.overlap == Overlap::skip_first_horizon ? 1 : 0);
  return static_cast<std::size_t>(config.window_len) +
         static_cast<std::size_t>(blocks) * static_cast<std::size_t>(config.horizon);
}

RollingResult run_rolling_forecast(const Series& data, const ExperimentConfig& config) {
  config.validate();
  const std::size_t needed = rolling_points_required(config);
  if (data.size() < needed) {
    throw SeriesTooShort("rolling forecast needs " + std::to_string(needed) + " points, got " +
                         std::to_string(data.size()));
  }
  const int h = config.horizon;
  const int skip = config.overlap == Overlap::skip_first_horizon ? h : 0;
  const Time first_s = data.start() + config.window_len - 1;

  std::vector<double> forecast;
  std::vector<double> linear;
  std::vector<Time> fit_ends;
  forecast.reserve(static_cast<std::size_t>(config.repetitions * h));
  for (int i = 0; i < config.repetitions; ++i) {
    const Time s_i = first_s + static_cast<Time>(i) * h;
    fit_ends.push_back(s_i);
    const WindowForecast wf = fit_window(data, s_i, config);
    for (int j = 1; j <= h; ++j) forecast.push_back(wf.model.evaluate(s_i + skip + j));
    if (config.baseline) {
      const Series line = linear_forecast(data, s_i, *config.baseline, skip + h);
      for (int j = 1; j <= h; ++j) linear.push_back(line.at(s_i + skip + j));
    }
  }

  const Time first_day = first_s + skip + 1;
  RollingResult out;
  out.forecast = Series(first_day, std::move(forecast));
  out.actual = data.slice(first_day, out.forecast.last());
  out.fit_ends = std::move(fit_ends);
  out.report = residual_metrics(drop_burn_in(out.forecast, config.burn_in),
                                drop_burn_in(out.actual, config.burn_in), Metric::abs, "causal");
  if (config.baseline) {
    out.linear = Series(first_day, std::move(linear));
    out.linear_report = residual_metrics(drop_burn_in(*out.linear, config.burn_in),
                                         drop_burn_in(out.actual, config.burn_in), Metric::abs,
                                         "linear");
  }
  return out;
}

}  // namespace blx
