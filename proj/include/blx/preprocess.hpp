#pragma once

#include <string>
#include <string_view>

#include "blx/bandlimit.hpp"

namespace blx {

enum class BoundaryPolicy {
  replicate_first_full,  // edge points copy the nearest full-window mean
  shrink_window,         // edge points average whatever neighbours exist
};

struct MovingAverageConfig {
  int width = 5;  // odd
  BoundaryPolicy boundary = BoundaryPolicy::replicate_first_full;
};

std::string_view to_string(BoundaryPolicy policy) noexcept;
BoundaryPolicy parse_boundary_policy(std::string_view text);

/// Centered moving average with the same start and length as `data`.
/// Throws SeriesTooShort when data is shorter than the width.
Series moving_average(const Series& data, const MovingAverageConfig& config);

enum class ForecastShift {
  none,
  last_mv,         // MV(s)
  mean_last_5_mv,  // mean of MV(s-4..s)
};

/// Level ("boost") correction. The history rebase and the forecast shift are
/// independent and compose.
struct LevelCorrection {
  bool historical_rebase = false;  // shift t <= s by the mean absolute on-window residual
  ForecastShift forecast = ForecastShift::none;

  bool is_none() const noexcept { return !historical_rebase && forecast == ForecastShift::none; }

  // Accepts "none", "last-mv", "mean-last-5-mv", "historical-rebase", any
  // '+'-joined combination, and "fixed" (historical-rebase+last-mv).
  static LevelCorrection parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const LevelCorrection&, const LevelCorrection&) = default;
};

/// Returns a copy of `model` with level shifts set from the moving average and
/// raw observations over the model's window. A mode of none clears the shifts.
FittedExtrapolator level_correct(const FittedExtrapolator& model, const Series& history_mv,
                                 const Series& raw, const LevelCorrection& mode);

}  // namespace blx
