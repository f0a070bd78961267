#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "blx/bandlimit.hpp"
#include "blx/errors.hpp"
#include "oracle/reference.hpp"

namespace blx {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuarter = kPi / 4;

BandParams band(int n_modes, double ridge = 0.05, double omega = kQuarter) {
  return BandParams{omega, n_modes, ridge};
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

// ---------------------------------------------------------------- sinc

TEST(Sinc, RemovableSingularity) { EXPECT_EQ(sinc(0.0), 1.0); }

TEST(Sinc, ZeroAtPi) { EXPECT_NEAR(sinc(kPi), 0.0, 1e-15); }

TEST(Sinc, HalfPi) { EXPECT_NEAR(sinc(kPi / 2), 2.0 / kPi, 1e-15); }

TEST(Sinc, SeriesBranchIsContinuous) {
  for (double x : {9.9e-9, 1e-8, 1.01e-8, -1e-8, 1e-5}) {
    EXPECT_NEAR(sinc(x), std::sin(x) / x, 1e-16) << x;
  }
}

// ---------------------------------------------------------------- types

TEST(BandParams, RejectsOutOfRange) {
  EXPECT_THROW(band(1, 0.1, 0.0).validate(), std::invalid_argument);
  EXPECT_THROW(band(1, 0.1, kPi).validate(), std::invalid_argument);
  EXPECT_THROW(band(0).validate(), std::invalid_argument);
  EXPECT_THROW(band(1, -1e-3).validate(), std::invalid_argument);
  EXPECT_NO_THROW(band(1, 0.0).validate());
}

TEST(Window, LengthAndRegime) {
  const Window w(-90, 0);
  EXPECT_EQ(w.length(), 91u);
  EXPECT_TRUE(w.in_unique_regime(45));
  EXPECT_FALSE(w.in_unique_regime(44));
  EXPECT_THROW(Window(1, 0), std::invalid_argument);
  EXPECT_EQ(Window(3, 3).length(), 1u);
}

TEST(Series, RejectsNonFinite) {
  EXPECT_THROW(Series(0, {1.0, std::nan("")}), std::invalid_argument);
  EXPECT_THROW(Series(0, {INFINITY}), std::invalid_argument);
}

TEST(Series, IndexesByAbsoluteTime) {
  const Series s(-2, {1, 2, 3, 2, 1});
  EXPECT_EQ(s.at(-2), 1);
  EXPECT_EQ(s.at(0), 3);
  EXPECT_EQ(s.last(), 2);
  EXPECT_THROW(s.at(3), std::out_of_range);
  EXPECT_EQ(s.slice(-1, 0), Series(-1, {2, 3}));
  EXPECT_THROW(s.slice(-3, 0), WindowNotCovered);
}

TEST(Coefficients, RequireOddLength) {
  EXPECT_THROW(Coefficients({1.0, 2.0}), std::invalid_argument);
  const Coefficients c({1.0, 2.0, 3.0});
  EXPECT_EQ(c.n_modes(), 1);
  EXPECT_EQ(c.mode(-1), 1.0);
  EXPECT_EQ(c.mode(1), 3.0);
}

// ---------------------------------------------------------------- apply_q

TEST(ApplyQ, CentreAtomAtOrigin) {
  EXPECT_NEAR(apply_q(band(1), Coefficients({0, 1, 0}), 0), 0.25, 1e-16);
}

TEST(ApplyQ, CentreAtomVanishesAtMultiplesOfPeriod) {
  EXPECT_NEAR(apply_q(band(1), Coefficients({0, 1, 0}), 4), 0.0, 1e-15);
}

TEST(ApplyQ, ShiftedAtomPeaksAtItsSample) {
  EXPECT_NEAR(apply_q(band(1), Coefficients({0, 0, 1}), -4), 0.25, 1e-16);
}

TEST(ApplyQ, MatchesDirectSum) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-1, 1);
  std::vector<double> y(21);
  for (auto& v : y) v = d(rng);
  const Coefficients c(y);
  for (Time t = -40; t <= 40; t += 3) {
    EXPECT_NEAR(apply_q(band(10), c, t), static_cast<double>(oracle::evaluate(kQuarter, y, t)),
                1e-14);
  }
}

// ---------------------------------------------------------------- apply_q_adjoint

TEST(ApplyQAdjoint, ImpulseAtOrigin) {
  const Coefficients c = apply_q_adjoint(band(1), Window(-2, 2), Series(-2, {0, 0, 1, 0, 0}));
  EXPECT_NEAR(c[0], 0.0, 1e-16);
  EXPECT_NEAR(c[1], 0.25, 1e-16);
  EXPECT_NEAR(c[2], 0.0, 1e-16);
}

TEST(ApplyQAdjoint, ZeroData) {
  const Coefficients c = apply_q_adjoint(band(1), Window(-2, 2), Series(-2, {0, 0, 0, 0, 0}));
  for (double v : c.values()) EXPECT_EQ(v, 0.0);
}

TEST(ApplyQAdjoint, MatchesDirectSummationOracle) {
  const std::vector<double> data{1, 2, 3, 2, 1};
  const Coefficients c = apply_q_adjoint(band(1), Window(-2, 2), Series(-2, data));
  const auto ref = oracle::adjoint(kQuarter, 1, -2, data);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(c[i], static_cast<double>(ref[i]), 1e-12);
}

TEST(ApplyQAdjoint, UsesOnlyTheWindow) {
  const Series wide(-5, {9, 9, 9, 1, 2, 3, 2, 1, 9, 9});
  const Coefficients a = apply_q_adjoint(band(1), Window(-2, 2), wide);
  const Coefficients b = apply_q_adjoint(band(1), Window(-2, 2), Series(-2, {1, 2, 3, 2, 1}));
  EXPECT_EQ(a, b);
}

TEST(ApplyQAdjoint, WindowNotCovered) {
  EXPECT_THROW(apply_q_adjoint(band(1), Window(-3, 2), Series(-2, {1, 2, 3, 2, 1})),
               WindowNotCovered);
}

// ---------------------------------------------------------------- build_gram

TEST(BuildGram, SinglePointWindow) {
  const GramMatrix g = build_gram(band(2), Window(0, 0));
  for (int k = -2; k <= 2; ++k) {
    for (int m = -2; m <= 2; ++m) {
      const double expected = (k == 0 && m == 0) ? 0.0625 : 0.0;
      EXPECT_NEAR(g.at_modes(k, m), expected, 1e-17) << k << "," << m;
    }
  }
}

TEST(BuildGram, SymmetricBitwise) {
  for (int n : {1, 4, 13}) {
    for (auto [q, s] : {std::pair<Time, Time>{-7, 3}, {0, 40}, {-90, 0}}) {
      const GramMatrix g = build_gram(band(n, 0.1, 0.9), Window(q, s));
      for (std::size_t i = 0; i < g.dim(); ++i) {
        for (std::size_t j = 0; j < g.dim(); ++j) ASSERT_EQ(g(i, j), g(j, i));
      }
    }
  }
}

TEST(BuildGram, MatchesTripleLoopOracleAtFullSize) {
  const GramMatrix g = build_gram(band(45), Window(-90, 0));
  const auto ref = oracle::gram(kQuarter, 45, -90, 0);
  for (std::size_t i = 0; i < g.dim(); ++i) {
    for (std::size_t j = 0; j < g.dim(); ++j) {
      const double r = static_cast<double>(ref[i][j]);
      EXPECT_NEAR(g(i, j), r, 1e-12 * std::max(std::fabs(r), 1e-3 * g.max_diagonal()))
          << i << "," << j;
    }
  }
}

TEST(BuildGram, PositiveSemidefinite) {
  for (auto [n, q, s] : {std::tuple{45, -90, 0}, {5, -10, 0}, {10, 0, 5}, {3, -40, 40}}) {
    const GramMatrix g = build_gram(band(n), Window(q, s));
    Eigen::MatrixXd m(g.dim(), g.dim());
    for (std::size_t i = 0; i < g.dim(); ++i) {
      for (std::size_t j = 0; j < g.dim(); ++j) m(i, j) = g(i, j);
    }
    const double smallest = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues()(0);
    EXPECT_GE(smallest, -1e-10 * g.max_diagonal()) << n << " [" << q << "," << s << "]";
  }
}

// R = Q*Q: each entry is the window inner product of two atom sequences.
TEST(BuildGram, EqualsAdjointOfAtomSequences) {
  const BandParams p = band(6, 0.1, 1.1);
  const Window w(-12, 9);
  const GramMatrix g = build_gram(p, w);
  for (int m = -6; m <= 6; ++m) {
    std::vector<double> atom_m;
    for (Time t = w.q(); t <= w.s(); ++t) atom_m.push_back(static_cast<double>(oracle::atom(1.1, m, t)));
    const Coefficients col = apply_q_adjoint(p, w, Series(w.q(), atom_m));
    for (int k = -6; k <= 6; ++k) EXPECT_NEAR(col.mode(k), g.at_modes(k, m), 1e-15);
  }
}

// ---------------------------------------------------------------- tikhonov_solve

TEST(TikhonovSolve, ZeroGramScalesByInverseRidge) {
  const GramMatrix zero(3, std::vector<double>(9, 0.0));
  const Coefficients y = tikhonov_solve(zero, 0.1, Coefficients({1.0, -2.0, 0.5}));
  EXPECT_NEAR(y[0], 10.0, 1e-13);
  EXPECT_NEAR(y[1], -20.0, 1e-13);
  EXPECT_NEAR(y[2], 5.0, 1e-13);
}

TEST(TikhonovSolve, IdentityWithoutRidge) {
  std::vector<double> eye(25, 0.0);
  for (int i = 0; i < 5; ++i) eye[i * 6] = 1.0;
  const Coefficients b({1, 2, 3, 4, 5});
  EXPECT_EQ(tikhonov_solve(GramMatrix(5, eye), 0.0, b), b);
}

TEST(TikhonovSolve, SingularWithoutRidge) {
  const GramMatrix g = build_gram(band(2), Window(0, 0));
  EXPECT_THROW(tikhonov_solve(g, 0.0, Coefficients::zeros(2)), SingularSystem);
  EXPECT_NO_THROW(tikhonov_solve(g, 1e-6, Coefficients::zeros(2)));
}

TEST(TikhonovSolve, RejectsMismatchedRhs) {
  const GramMatrix g = build_gram(band(2), Window(-4, 0));
  EXPECT_THROW(tikhonov_solve(g, 0.1, Coefficients::zeros(1)), std::invalid_argument);
}

TEST(TikhonovSolve, MatchesHighPrecisionGolden) {
  const auto golden = oracle::load_golden("tikhonov_n45.json");
  const GramMatrix g = build_gram(band(45), Window(-90, 0));
  const Coefficients rhs(golden["rhs"].get<std::vector<double>>());
  const Coefficients y = tikhonov_solve(g, golden["ridge"].get<double>(), rhs);
  const auto expected = golden["solution"].get<std::vector<double>>();
  const double scale = max_abs(expected);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_NEAR(y[i], expected[i], 1e-8 * scale) << i;
  }
}

TEST(TikhonovSolve, ResidualBound) {
  const GramMatrix g = build_gram(band(45), Window(-90, 0));
  std::vector<double> b(91);
  for (int i = 0; i < 91; ++i) b[i] = std::cos(0.21 * i) - 0.3;
  for (double ridge : {0.1, 0.05, 1e-4}) {
    const Coefficients y = tikhonov_solve(g, ridge, Coefficients(b));
    double worst = 0.0;
    for (std::size_t i = 0; i < 91; ++i) {
      double acc = ridge * y[i];
      for (std::size_t j = 0; j < 91; ++j) acc += g(i, j) * y[j];
      worst = std::max(worst, std::fabs(acc - b[i]));
    }
    EXPECT_LE(worst, 1e-9 * max_abs(b)) << ridge;
  }
}

TEST(RidgeFactor, ConditionEstimateGrowsAsRidgeShrinks) {
  const GramMatrix g = build_gram(band(45), Window(-90, 0));
  const double loose = RidgeFactor(g, 0.1).condition_estimate();
  const double tight = RidgeFactor(g, 1e-4).condition_estimate();
  EXPECT_GE(loose, 1.0);
  EXPECT_GT(tight, loose);
}

// ---------------------------------------------------------------- fit / evaluate

TEST(Fit, ZeroDataGivesZeroModel) {
  const FittedExtrapolator m = fit(band(4), Window(-8, 0), Series(-8, std::vector<double>(9, 0.0)));
  for (double v : m.coefficients().values()) EXPECT_EQ(v, 0.0);
  for (Time t = -20; t <= 20; ++t) EXPECT_EQ(m.evaluate(t), 0.0);
}

TEST(Fit, WindowNotCovered) {
  EXPECT_THROW(fit(band(4), Window(-8, 0), Series(-7, std::vector<double>(8, 1.0))),
               WindowNotCovered);
}

TEST(Fit, ReconstructsBandLimitedData) {
  const auto golden = oracle::load_golden("reconstruction_n5.json");
  const auto data = golden["data"].get<std::vector<double>>();
  const Window w(golden["q"].get<Time>(), golden["s"].get<Time>());
  const FittedExtrapolator m = fit(band(5, golden["ridge"].get<double>()), w, Series(w.q(), data));
  double worst = 0.0;
  for (Time t = w.q(); t <= w.s(); ++t) worst = std::max(worst, std::fabs(m.evaluate(t) - data[t - w.q()]));
  EXPECT_LE(worst, golden["tolerance"].get<double>());
}

TEST(Fit, GoldenMonteCarloCoefficients) {
  const auto golden = oracle::load_golden("mc_fit_seed42.json");
  const auto path = golden["path"].get<std::vector<double>>();
  const FittedExtrapolator m = fit(band(45, 0.05), Window(-90, 0), Series(-90, path));
  const auto expected = golden["coefficients"].get<std::vector<double>>();
  const double scale = max_abs(expected);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_NEAR(m.coefficients()[i], expected[i], 1e-9 * scale) << i;
  }
  const auto ahead = golden["forecast"].get<std::vector<double>>();
  for (int h = 1; h <= 20; ++h) EXPECT_NEAR(m.evaluate(h), ahead[h - 1], 1e-10) << h;
}

TEST(Evaluate, DecaysFarFromWindow) {
  const auto golden = oracle::load_golden("mc_fit_seed42.json");
  const FittedExtrapolator m =
      fit(band(45, 0.05), Window(-90, 0), Series(-90, golden["path"].get<std::vector<double>>()));
  const std::vector<double> on_window = m.evaluate(-90, 0);
  const double far = m.evaluate(1000);
  EXPECT_NEAR(far, golden["far_value"].get<double>(), 1e-12);
  EXPECT_LT(std::fabs(far), 0.05 * max_abs(on_window));
}

TEST(Evaluate, ZeroCoefficientModel) {
  const FittedExtrapolator m(band(3), Window(0, 6), Coefficients::zeros(3));
  for (Time t : {-100, 0, 3, 6, 7, 1000}) EXPECT_EQ(evaluate(m, t), 0.0);
}

TEST(Evaluate, SamplingIdentity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-2, 2);
  for (int n : {1, 5, 20, 45}) {
    std::vector<double> y(2 * n + 1);
    for (auto& v : y) v = d(rng);
    const FittedExtrapolator base(band(n), Window(-2 * n, 0), Coefficients(y));
    const FittedExtrapolator shifted = base.with_level_shifts(1.25, -3.0);
    for (int k = -n; k <= n; ++k) {
      const Time t = -4 * k;
      EXPECT_NEAR(base.evaluate(t), 0.25 * y[k + n], 1e-12);
      const double shift = t <= 0 ? 1.25 : -3.0;
      EXPECT_NEAR(shifted.evaluate(t) - shift, 0.25 * y[k + n], 1e-12);
    }
  }
}

TEST(Evaluate, ShiftsSplitAtWindowEnd) {
  const FittedExtrapolator m =
      FittedExtrapolator(band(2), Window(-4, 0), Coefficients::zeros(2)).with_level_shifts(2.0, 5.0);
  EXPECT_EQ(m.evaluate(0), 2.0);
  EXPECT_EQ(m.evaluate(1), 5.0);
  EXPECT_EQ(m.raw(1), 0.0);
}

// ---------------------------------------------------------------- properties

TEST(Properties, Adjointness) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> n_dist(1, 10), len_dist(1, 25), q_dist(-60, 60);
  std::uniform_real_distribution<double> v(-1, 1), om(0.05, 3.0);
  for (int c = 0; c < 200; ++c) {
    const BandParams p{om(rng), n_dist(rng), 0.1};
    const Time q = q_dist(rng);
    const Window w(q, q + len_dist(rng) - 1);
    std::vector<double> y(p.dim()), z(w.length());
    for (auto& x : y) x = v(rng);
    for (auto& x : z) x = v(rng);
    const Coefficients yc(y);
    double lhs = 0.0, lhs_abs = 0.0;
    for (Time t = w.q(); t <= w.s(); ++t) {
      const double term = apply_q(p, yc, t) * z[t - w.q()];
      lhs += term;
      lhs_abs += std::fabs(term);
    }
    const Coefficients qz = apply_q_adjoint(p, w, Series(w.q(), z));
    double rhs = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) rhs += y[i] * qz[i];
    EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, lhs_abs)) << "case " << c;
  }
}

TEST(Properties, RidgeMonotonicity) {
  const auto golden = oracle::load_golden("mc_fit_seed42.json");
  const Series z(-90, golden["path"].get<std::vector<double>>());
  double previous = INFINITY;
  for (double ridge : {0.1, 0.01, 1e-4, 1e-6}) {
    const FittedExtrapolator m = fit(band(45, ridge), Window(-90, 0), z);
    double residual = 0.0;
    for (Time t = -90; t <= 0; ++t) residual += std::fabs(m.evaluate(t) - z.at(t));
    EXPECT_LE(residual, previous) << ridge;
    previous = residual;
  }
}

TEST(Properties, Linearity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> v(-3, 3);
  const BandParams p = band(8, 0.05);
  const Window w(-16, 0);
  std::vector<double> z1(17), z2(17), mix(17);
  const double alpha = 1.7, beta = -0.4;
  for (int i = 0; i < 17; ++i) {
    z1[i] = v(rng);
    z2[i] = v(rng);
    mix[i] = alpha * z1[i] + beta * z2[i];
  }
  const auto c1 = fit(p, w, Series(-16, z1)).coefficients();
  const auto c2 = fit(p, w, Series(-16, z2)).coefficients();
  const auto cm = fit(p, w, Series(-16, mix)).coefficients();
  const double scale = max_abs(cm.values());
  for (std::size_t i = 0; i < cm.size(); ++i) {
    EXPECT_NEAR(cm[i], alpha * c1[i] + beta * c2[i], 1e-9 * scale);
  }
}

TEST(Properties, DeterministicBitwise) {
  const auto golden = oracle::load_golden("mc_fit_seed42.json");
  const Series z(-90, golden["path"].get<std::vector<double>>());
  const auto a = fit(band(45), Window(-90, 0), z);
  const auto b = fit(band(45), Window(-90, 0), z);
  EXPECT_EQ(a.coefficients(), b.coefficients());
}

TEST(WindowFitter, AgreesWithFreeFit) {
  const auto golden = oracle::load_golden("mc_fit_seed42.json");
  const Series z(-90, golden["path"].get<std::vector<double>>());
  const WindowFitter fitter(band(45), Window(-90, 0));
  EXPECT_EQ(fitter.fit(z).coefficients(), fit(band(45), Window(-90, 0), z).coefficients());
  EXPECT_GT(fitter.condition_estimate(), 1.0);
}

}  // namespace
}  // namespace blx
