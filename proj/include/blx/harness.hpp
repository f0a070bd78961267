#pragma once

// Experiment runners: one forecast from a single history window, and rolling
// forecasts over advancing windows, each scored against the raw series and
// against a linear secant baseline.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blx/bandlimit.hpp"
#include "blx/baseline.hpp"
#include "blx/preprocess.hpp"

namespace blx {

enum class Overlap {
  none,                // each window emits s+1 .. s+h
  skip_first_horizon,  // each window forecasts 2h points and emits s+h+1 .. s+2h
};

std::string_view to_string(Overlap overlap) noexcept;
Overlap parse_overlap(std::string_view text);

enum class Metric { abs, squared };

std::string_view to_string(Metric metric) noexcept;
Metric parse_metric(std::string_view text);

struct ExperimentConfig {
  int window_len = 91;
  int horizon = 20;
  int repetitions = 1;
  BandParams band{0.7853981633974483, 45, 0.1};
  MovingAverageConfig ma{};
  LevelCorrection correction{};
  std::optional<LinearBaselineConfig> baseline{};
  Overlap overlap = Overlap::none;
  int burn_in = 0;  // emitted days excluded from the residual reports

  void validate() const;
};

struct ResidualReport {
  std::string label;
  Metric metric = Metric::abs;
  std::vector<double> per_point;
  double total = 0.0;
  double mean = 0.0;
  int n_points = 0;
};

struct ComparisonReport {
  ResidualReport causal;
  ResidualReport linear;
  std::string winner;  // "causal", "linear" or "tie"
  double margin_per_point = 0.0;
};

/// Pointwise residuals of aligned series. Throws LengthMismatch when the
/// lengths or start times differ.
ResidualReport residual_metrics(const Series& pred, const Series& actual, Metric metric,
                                std::string label = {});

/// Throws IncomparableReports on metric or length mismatch.
ComparisonReport compare(const ResidualReport& causal, const ResidualReport& linear);

struct ForecastResult {
  FittedExtrapolator model;
  Series history_mv;   // moving average over the fit window
  Series history_fit;  // corrected fit over the window
  Series forecast;     // s+1 .. s+horizon
  Series actual;
  std::optional<Series> linear;
  ResidualReport report;      // label "causal"
  ResidualReport historical;  // label "historical", on-window
  std::optional<ResidualReport> linear_report;
};

/// Fits on the first window_len points of `data`. Throws SeriesTooShort when
/// data is shorter than window_len + horizon.
ForecastResult run_single_forecast(const Series& data, const ExperimentConfig& config);

struct RollingResult {
  Series forecast;  // stitched emissions, one value per day
  Series actual;
  std::optional<Series> linear;
  ResidualReport report;  // label "causal"
  std::optional<ResidualReport> linear_report;
  std::vector<Time> fit_ends;  // s_i for each repetition
};

/// Repetition i fits on the window ending at s_i = start + window_len - 1 +
/// i*horizon and reads no data past s_i. Throws SeriesTooShort when the
/// series does not reach the last emitted day.
RollingResult run_rolling_forecast(const Series& data, const ExperimentConfig& config);

/// Data points needed by run_rolling_forecast for `config`.
std::size_t rolling_points_required(const ExperimentConfig& config);

}  // namespace blx
