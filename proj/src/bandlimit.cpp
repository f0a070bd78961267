#include "blx/bandlimit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "blx/errors.hpp"
#include "blx/simd/kernels.hpp"

namespace blx {

double sinc(double x) noexcept {
  if (std::fabs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

void BandParams::validate() const {
  if (!(omega > 0.0 && omega < std::numbers::pi)) {
    throw std::invalid_argument("omega must lie in (0, pi), got " + std::to_string(omega));
  }
  if (n_modes < 1) {
    throw std::invalid_argument("n_modes must be >= 1, got " + std::to_string(n_modes));
  }
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
    throw std::invalid_argument("ridge must be finite and >= 0, got " + std::to_string(ridge));
  }
}

Window::Window(Time q, Time s) : q_(q), s_(s) {
  if (q > s) {
    throw std::invalid_argument("window requires q <= s, got [" + std::to_string(q) + ", " +
                                std::to_string(s) + "]");
  }
}

Series::Series(Time start, std::vector<double> values) : start_(start), values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw std::invalid_argument("series value at t=" + std::to_string(start_ + Time(i)) +
                                  " is not finite");
    }
  }
}

double Series::at(Time t) const {
  if (empty() || t < start_ || t > last()) {
    throw std::out_of_range("t=" + std::to_string(t) + " outside series");
  }
  return values_[static_cast<std::size_t>(t - start_)];
}

Series Series::slice(Time from, Time to) const {
  if (from > to || !covers(from, to)) {
    throw WindowNotCovered("series [" + std::to_string(start_) + ", " + std::to_string(last()) +
                           "] does not cover [" + std::to_string(from) + ", " +
                           std::to_string(to) + "]");
  }
  const auto begin = values_.begin() + (from - start_);
  return Series(from, std::vector<double>(begin, begin + (to - from + 1)));
}

Coefficients::Coefficients(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() % 2 == 0) {
    throw std::invalid_argument("coefficient vector must have odd length 2N+1, got " +
                                std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("coefficient is not finite");
  }
}

Coefficients Coefficients::zeros(int n_modes) {
  return Coefficients(std::vector<double>(static_cast<std::size_t>(2 * n_modes + 1), 0.0));
}

namespace {

double atom_argument(int k, double omega, Time t) {
  return static_cast<double>(k) * std::numbers::pi + omega * static_cast<double>(t);
}

}  // namespace

SincAtoms::SincAtoms(double omega, int n_modes, const Window& window)
    : n_modes_(n_modes), window_(window) {
  const std::size_t len = window.length();
  const double scale = omega / std::numbers::pi;
  atoms_.resize(static_cast<std::size_t>(2 * n_modes + 1) * len);
  for (int k = -n_modes; k <= n_modes; ++k) {
    double* row = atoms_.data() + static_cast<std::size_t>(k + n_modes) * len;
    for (std::size_t j = 0; j < len; ++j) {
      row[j] = scale * sinc(atom_argument(k, omega, window.q() + Time(j)));
    }
  }
}

GramMatrix::GramMatrix(std::size_t dim, std::vector<double> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (entries_.size() != dim * dim) {
    throw std::invalid_argument("gram entries do not match dimension");
  }
}

double GramMatrix::at_modes(int k, int m) const {
  const int n = static_cast<int>(dim_ / 2);
  if (k < -n || k > n || m < -n || m > n) throw std::out_of_range("mode index outside [-N, N]");
  return (*this)(static_cast<std::size_t>(k + n), static_cast<std::size_t>(m + n));
}

double GramMatrix::max_diagonal() const noexcept {
  double best = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) best = std::max(best, (*this)(i, i));
  return best;
}

RidgeFactor::RidgeFactor(const GramMatrix& gram, double ridge) : dim_(gram.dim()) {
  if (!(ridge >= 0.0)) throw std::invalid_argument("ridge must be >= 0");
  const auto& kern = simd::active_kernels();
  const std::size_t n = dim_;
  lower_.assign(n * n, 0.0);

  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, gram(i, i) + ridge);
  // Pivots below this are indistinguishable from rounding noise.
  const double floor = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * max_diag;

  double min_pivot = std::numeric_limits<double>::infinity();
  double max_pivot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double* row_i = lower_.data() + i * n;
    for (std::size_t j = 0; j < i; ++j) {
      const double* row_j = lower_.data() + j * n;
      row_i[j] = (gram(i, j) - kern.dot(row_i, row_j, j)) / row_j[j];
    }
    const double pivot = gram(i, i) + ridge - kern.dot(row_i, row_i, i);
    if (!(pivot > floor) || !std::isfinite(pivot)) {
      throw SingularSystem("gram + ridge*I is not positive definite (pivot " +
                           std::to_string(i) + " = " + std::to_string(pivot) +
                           "); use a positive ridge");
    }
    row_i[i] = std::sqrt(pivot);
    min_pivot = std::min(min_pivot, pivot);
    max_pivot = std::max(max_pivot, pivot);
  }
  condition_ = n == 0 ? 1.0 : max_pivot / min_pivot;
}

Coefficients RidgeFactor::solve(std::span<const double> rhs) const {
  if (rhs.size() != dim_) throw std::invalid_argument("rhs length does not match gram dimension");
  const std::size_t n = dim_;
  std::vector<double> x(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = lower_.data() + i * n;
    double acc = x[i];
    for (std::size_t j = 0; j < i; ++j) acc -= row[j] * x[j];
    x[i] = acc / row[i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double acc = x[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= lower_[j * n + i] * x[j];
    x[i] = acc / lower_[i * n + i];
  }
  return Coefficients(std::move(x));
}

FittedExtrapolator::FittedExtrapolator(BandParams params, Window window, Coefficients coeffs,
                                       double condition_estimate)
    : params_(params), window_(window), coeffs_(std::move(coeffs)), condition_(condition_estimate) {
  if (coeffs_.size() != static_cast<std::size_t>(params_.dim())) {
    throw std::invalid_argument("coefficient count does not match 2*n_modes+1");
  }
}

double FittedExtrapolator::raw(Time t) const { return apply_q(params_, coeffs_, t); }

double FittedExtrapolator::evaluate(Time t) const {
  return raw(t) + (t <= window_.s() ? shift_history_ : shift_forecast_);
}

std::vector<double> FittedExtrapolator::evaluate(Time from, Time to) const {
  std::vector<double> out;
  if (to < from) return out;
  out.reserve(static_cast<std::size_t>(to - from + 1));
  for (Time t = from; t <= to; ++t) out.push_back(evaluate(t));
  return out;
}

FittedExtrapolator FittedExtrapolator::with_level_shifts(double history, double forecast) const {
  FittedExtrapolator copy = *this;
  copy.shift_history_ = history;
  copy.shift_forecast_ = forecast;
  return copy;
}

double apply_q(const BandParams& params, const Coefficients& coeffs, Time t) {
  const std::size_t dim = coeffs.size();
  if (dim != static_cast<std::size_t>(params.dim())) {
    throw std::invalid_argument("coefficient count does not match 2*n_modes+1");
  }
  thread_local std::vector<double> row;
  row.resize(dim);
  for (int k = -params.n_modes; k <= params.n_modes; ++k) {
    row[static_cast<std::size_t>(k + params.n_modes)] = sinc(atom_argument(k, params.omega, t));
  }
  return params.omega / std::numbers::pi *
         simd::active_kernels().dot(row.data(), coeffs.values().data(), dim);
}

Coefficients apply_q_adjoint(const SincAtoms& atoms, const Series& data) {
  const Window& w = atoms.window();
  if (!data.covers(w)) {
    throw WindowNotCovered("data does not cover window [" + std::to_string(w.q()) + ", " +
                           std::to_string(w.s()) + "]");
  }
  const double* z = data.values().data() + (w.q() - data.start());
  const auto& kern = simd::active_kernels();
  const std::size_t dim = static_cast<std::size_t>(2 * atoms.n_modes() + 1);
  std::vector<double> out(dim);
  for (std::size_t i = 0; i < dim; ++i) out[i] = kern.dot(atoms.mode_row(i).data(), z, w.length());
  return Coefficients(std::move(out));
}

Coefficients apply_q_adjoint(const BandParams& params, const Window& window, const Series& data) {
  params.validate();
  return apply_q_adjoint(SincAtoms(params.omega, params.n_modes, window), data);
}

GramMatrix build_gram(const SincAtoms& atoms) {
  const std::size_t dim = static_cast<std::size_t>(2 * atoms.n_modes() + 1);
  const std::size_t len = atoms.window().length();
  const auto& kern = simd::active_kernels();
  std::vector<double> entries(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      const double v = kern.dot(atoms.mode_row(i).data(), atoms.mode_row(j).data(), len);
      entries[i * dim + j] = v;
      entries[j * dim + i] = v;
    }
  }
  return GramMatrix(dim, std::move(entries));
}

GramMatrix build_gram(const BandParams& params, const Window& window) {
  params.validate();
  return build_gram(SincAtoms(params.omega, params.n_modes, window));
}

Coefficients tikhonov_solve(const GramMatrix& gram, double ridge, const Coefficients& rhs) {
  if (rhs.size() != gram.dim()) {
    throw std::invalid_argument("rhs length does not match gram dimension");
  }
  return RidgeFactor(gram, ridge).solve(rhs.values());
}

WindowFitter::WindowFitter(const BandParams& params, const Window& window)
    : params_((params.validate(), params)),
      atoms_(params.omega, params.n_modes, window),
      gram_(build_gram(atoms_)),
      factor_(gram_, params.ridge) {}

FittedExtrapolator WindowFitter::fit(const Series& data) const {
  Coefficients rhs = apply_q_adjoint(atoms_, data);
  return FittedExtrapolator(params_, window(), factor_.solve(rhs.values()),
                            factor_.condition_estimate());
}

FittedExtrapolator fit(const BandParams& params, const Window& window, const Series& data) {
  if (!data.covers(window)) {
    throw WindowNotCovered("data does not cover window [" + std::to_string(window.q()) + ", " +
                           std::to_string(window.s()) + "]");
  }
  return WindowFitter(params, window).fit(data);
}

}  // namespace blx
