#pragma once

#include "blx/bandlimit.hpp"

namespace blx {

struct LinearBaselineConfig {
  int lookback = 90;  // A: the secant runs from t0-A to t0
};

/// Secant-line forecast through (t0-A, z(t0-A)) and (t0, z(t0)), evaluated at
/// t0+1 .. t0+horizon. Throws InsufficientHistory when the data does not
/// reach back to t0-A or forward to t0.
Series linear_forecast(const Series& data, Time t0, const LinearBaselineConfig& config,
                       int horizon);

}  // namespace blx
