#include "blx/baseline.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "blx/errors.hpp"

namespace blx {

Series linear_forecast(const Series& data, Time t0, const LinearBaselineConfig& config,
                       int horizon) {
  if (config.lookback < 1) throw std::invalid_argument("lookback must be >= 1");
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  const Time anchor = t0 - config.lookback;
  if (!data.covers(anchor, t0)) {
    throw InsufficientHistory("linear baseline needs data on [" + std::to_string(anchor) + ", " +
                              std::to_string(t0) + "]");
  }
  const double slope = (data.at(t0) - data.at(anchor)) / static_cast<double>(config.lookback);
  const double intercept = data.at(t0) - slope * static_cast<double>(t0);
  std::vector<double> out(static_cast<std::size_t>(horizon));
  for (int h = 1; h <= horizon; ++h) {
    out[static_cast<std::size_t>(h - 1)] = slope * static_cast<double>(t0 + h) + intercept;
  }
  return Series(t0 + 1, std::move(out));
}

}  // namespace blx
