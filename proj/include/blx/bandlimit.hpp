#pragma once

// Causal band-limited smoothing and extrapolation.
//
// A fitted sequence is a finite sinc series
//
//     x(t) = (omega / pi) * sum_{k=-N..N} y_k * sinc(k*pi + omega*t)
//
// whose coefficients y solve the ridge-regularised normal equations
// (R + ridge*I) y = Q* z over an observation window [q, s]. R is the Gram
// matrix of the sinc atoms restricted to the window. Evaluating the series
// past s extrapolates.
//
// Summation order: atoms are summed over k ascending and observations over t
// ascending. With BLX_KERNEL=scalar the results are bit-reproducible in that
// order; SIMD variants fix a different (but still deterministic) order.

#include <cstdint>
#include <span>
#include <vector>

namespace blx {

using Time = std::int64_t;

/// sin(x)/x with the removable singularity filled in.
double sinc(double x) noexcept;

struct BandParams {
  double omega = 0.0;  // radians per sample, in (0, pi)
  int n_modes = 0;     // coefficients run over k = -n_modes..n_modes
  double ridge = 0.0;  // Tikhonov weight

  int dim() const noexcept { return 2 * n_modes + 1; }

  // Throws std::invalid_argument when out of range.
  void validate() const;
};

/// Observation index range {q, ..., s}.
class Window {
 public:
  Window(Time q, Time s);

  Time q() const noexcept { return q_; }
  Time s() const noexcept { return s_; }
  std::size_t length() const noexcept { return static_cast<std::size_t>(s_ - q_ + 1); }
  bool contains(Time t) const noexcept { return t >= q_ && t <= s_; }

  // L <= 2N+1: the regime where the least-squares fit on the window is unique.
  bool in_unique_regime(int n_modes) const noexcept {
    return length() <= static_cast<std::size_t>(2 * n_modes + 1);
  }

  friend bool operator==(const Window&, const Window&) = default;

 private:
  Time q_;
  Time s_;
};

/// Finite samples at consecutive integer times start, start+1, ...
class Series {
 public:
  Series() = default;
  Series(Time start, std::vector<double> values);

  Time start() const noexcept { return start_; }
  Time last() const noexcept { return start_ + static_cast<Time>(values_.size()) - 1; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  bool covers(Time from, Time to) const noexcept {
    return !values_.empty() && from >= start_ && to <= last();
  }
  bool covers(const Window& w) const noexcept { return covers(w.q(), w.s()); }

  double at(Time t) const;  // throws std::out_of_range
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  // Throws WindowNotCovered when [from, to] is not inside the series.
  Series slice(Time from, Time to) const;

  friend bool operator==(const Series&, const Series&) = default;

 private:
  Time start_ = 0;
  std::vector<double> values_;
};

/// Sinc-series weights y_k for k = -N..N, stored in that order.
class Coefficients {
 public:
  Coefficients() = default;
  explicit Coefficients(std::vector<double> values);
  static Coefficients zeros(int n_modes);

  int n_modes() const noexcept { return static_cast<int>(values_.size() / 2); }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double mode(int k) const { return values_.at(static_cast<std::size_t>(k + n_modes())); }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const Coefficients&, const Coefficients&) = default;

 private:
  std::vector<double> values_;
};

/// Scaled atoms (omega/pi) sinc(k*pi + omega*t) over a window, laid out one
/// contiguous row per mode so projections are plain dot products.
class SincAtoms {
 public:
  SincAtoms(double omega, int n_modes, const Window& window);

  const Window& window() const noexcept { return window_; }
  int n_modes() const noexcept { return n_modes_; }
  std::span<const double> mode_row(std::size_t index) const noexcept {
    return {atoms_.data() + index * window_.length(), window_.length()};
  }

 private:
  int n_modes_;
  Window window_;
  std::vector<double> atoms_;
};

class GramMatrix {
 public:
  GramMatrix(std::size_t dim, std::vector<double> entries);

  std::size_t dim() const noexcept { return dim_; }
  // 0-based storage indices; entry (i, j) pairs modes i-N and j-N.
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * dim_ + j]; }
  double at_modes(int k, int m) const;
  std::span<const double> entries() const noexcept { return entries_; }
  double max_diagonal() const noexcept;

 private:
  std::size_t dim_;
  std::vector<double> entries_;
};

/// Cholesky factor of gram + ridge*I.
class RidgeFactor {
 public:
  // Throws SingularSystem when a pivot is not strictly positive.
  RidgeFactor(const GramMatrix& gram, double ridge);

  std::size_t dim() const noexcept { return dim_; }
  Coefficients solve(std::span<const double> rhs) const;

  // Ratio of the largest to the smallest squared diagonal pivot.
  double condition_estimate() const noexcept { return condition_; }

 private:
  std::size_t dim_;
  std::vector<double> lower_;
  double condition_ = 1.0;
};

class FittedExtrapolator {
 public:
  FittedExtrapolator(BandParams params, Window window, Coefficients coeffs,
                     double condition_estimate = 0.0);

  const BandParams& params() const noexcept { return params_; }
  const Window& window() const noexcept { return window_; }
  const Coefficients& coefficients() const noexcept { return coeffs_; }
  double level_shift_history() const noexcept { return shift_history_; }
  double level_shift_forecast() const noexcept { return shift_forecast_; }
  double condition_estimate() const noexcept { return condition_; }

  // Fitted series without level shifts.
  double raw(Time t) const;
  // Smoothing on t <= s, extrapolation past s; includes the level shifts.
  double evaluate(Time t) const;
  std::vector<double> evaluate(Time from, Time to) const;

  FittedExtrapolator with_level_shifts(double history, double forecast) const;

 private:
  BandParams params_;
  Window window_;
  Coefficients coeffs_;
  double shift_history_ = 0.0;
  double shift_forecast_ = 0.0;
  double condition_ = 0.0;
};

// (omega/pi) sum_k y_k sinc(k*pi + omega*t)
double apply_q(const BandParams& params, const Coefficients& coeffs, Time t);

// (Q*z)_k = (omega/pi) sum_{t=q..s} sinc(k*pi + omega*t) z(t)
Coefficients apply_q_adjoint(const BandParams& params, const Window& window, const Series& data);
Coefficients apply_q_adjoint(const SincAtoms& atoms, const Series& data);

GramMatrix build_gram(const BandParams& params, const Window& window);
GramMatrix build_gram(const SincAtoms& atoms);

Coefficients tikhonov_solve(const GramMatrix& gram, double ridge, const Coefficients& rhs);

FittedExtrapolator fit(const BandParams& params, const Window& window, const Series& data);

inline double evaluate(const FittedExtrapolator& model, Time t) { return model.evaluate(t); }

/// Atoms and factorisation for one (params, window) pair, reused across many
/// data vectors. Immutable; safe to share between threads.
class WindowFitter {
 public:
  WindowFitter(const BandParams& params, const Window& window);

  const BandParams& params() const noexcept { return params_; }
  const Window& window() const noexcept { return atoms_.window(); }
  const SincAtoms& atoms() const noexcept { return atoms_; }
  const GramMatrix& gram() const noexcept { return gram_; }
  double condition_estimate() const noexcept { return factor_.condition_estimate(); }

  FittedExtrapolator fit(const Series& data) const;

 private:
  BandParams params_;
  SincAtoms atoms_;
  GramMatrix gram_;
  RidgeFactor factor_;
};

}  // namespace blx
