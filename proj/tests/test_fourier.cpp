#include <gtest/gtest.h>

#include <random>

#include "moran/errors.hpp"
#include "moran/fourier.hpp"
#include "oracles.hpp"

using namespace moran;

namespace {

Rational q(long p, long d) { return Rational(Integer(p), Integer(d)); }

const MoranSystem kSys44 = MoranSystem::finite({4, 4}, {2, 2});
const MoranSystem kSys46 = MoranSystem::finite({4, 6}, {3, 2});
const MoranSystem kPeriodic4 = MoranSystem::periodic({}, {}, {4}, {2});

Rational random_rational(std::mt19937 &rng, long span, long max_den) {
  std::uniform_int_distribution<long> num(-span * max_den, span * max_den), den(1, max_den);
  return Rational(Integer(num(rng)), Integer(den(rng)));
}

} // namespace

TEST(FactorTransform, SingleLevelValues) {
  const DigitLevel lv{4, 2, 1};
  const auto at0 = factor_transform(lv, 4, 0);
  EXPECT_DOUBLE_EQ(at0.value.real(), 1.0);
  EXPECT_FALSE(at0.exact_zero);
  const auto at2 = factor_transform(lv, 4, 2);
  EXPECT_TRUE(at2.exact_zero);
  EXPECT_EQ(at2.error_bound, 0.0);
  EXPECT_EQ(std::abs(at2.value), 0.0);
  EXPECT_NEAR(std::abs(factor_transform(lv, 4, 1).value), std::cos(M_PI / 4), 1e-15);
}

TEST(FactorTransform, MatchesDirectSummation) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const long b = 2 + trial % 9, n = 1 + trial % 7, a = 1 + trial % 4;
    const Rational xi = random_rational(rng, 50, 30);
    const auto got = factor_transform(DigitLevel{b, n, a}, b, xi);
    const auto want = oracle::transform({{b, n, a}}, 1, 1, static_cast<long double>(xi.to_double()));
    EXPECT_NEAR(got.value.real(), static_cast<double>(want.real()), 1e-12) << xi;
    EXPECT_NEAR(got.value.imag(), static_cast<double>(want.imag()), 1e-12) << xi;
    if (got.exact_zero) EXPECT_LT(std::abs(want), 1e-12L);
  }
}

TEST(EvaluateTransform, FiniteWindowExamples) {
  const auto w = MeasureWindow::head(kSys44, 2);
  EXPECT_EQ(evaluate_transform(w, 0).value, std::complex<double>(1.0, 0.0));
  const auto v = evaluate_transform(w, 1);
  EXPECT_NEAR(std::abs(v.value), std::cos(M_PI / 4) * std::cos(M_PI / 16), 1e-14);
  EXPECT_NEAR(std::abs(v.value), 0.69352, 1e-5);
  EXPECT_LE(v.error_bound, 2 * 0x1p-45);
}

TEST(EvaluateTransform, FiniteWindowsMatchOracle) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<long> base(2, 8), count(1, 6), scale(1, 3);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<oracle::Level> levels;
    std::vector<DigitLevel> prefix;
    for (int k = 0; k < 3; ++k) {
      const long b = base(rng), n = std::max(2L, count(rng)), a = scale(rng);
      levels.push_back({b, n, a});
      prefix.push_back(DigitLevel{b, n, a});
    }
    const MoranSystem sys(prefix, NoTail{});
    const std::size_t first = 1 + trial % 2;
    const MeasureWindow w(sys, first, 3);
    for (int i = 0; i < 10; ++i) {
      const Rational xi = random_rational(rng, 40, 12);
      const auto got = evaluate_transform(w, xi);
      const auto want = oracle::transform(levels, first, 3, static_cast<long double>(xi.to_double()));
      EXPECT_NEAR(got.value.real(), static_cast<double>(want.real()), 1e-11);
      EXPECT_NEAR(got.value.imag(), static_cast<double>(want.imag()), 1e-11);
    }
  }
}

TEST(EvaluateTransform, ProductOfFactors) {
  std::mt19937 rng(9);
  const MoranSystem sys = MoranSystem::periodic({5, 3}, {3, 2}, {6, 4}, {3, 2});
  const auto w = MeasureWindow::head(sys, 6);
  for (int i = 0; i < 200; ++i) {
    const Rational xi = random_rational(rng, 100, 20);
    std::complex<double> product = 1;
    Integer b = 1;
    for (std::size_t k = 1; k <= 6; ++k) {
      b *= sys.level(k).base;
      product *= factor_transform(sys.level(k), b, xi).value;
    }
    EXPECT_LE(std::abs(evaluate_transform(w, xi).value - product), 10 * 0x1p-45 * 6);
  }
}

TEST(EvaluateTransform, FiniteWindowsArePeriodic) {
  std::mt19937 rng(13);
  const auto w = MeasureWindow::head(kSys46, 2);
  for (int i = 0; i < 200; ++i) {
    const Rational xi = random_rational(rng, 30, 15);
    const auto a = evaluate_transform(w, xi);
    const auto b = evaluate_transform(w, xi + Rational(24));
    EXPECT_LE(std::abs(a.value - b.value), 2 * (a.error_bound + b.error_bound) + 1e-15);
    EXPECT_EQ(a.exact_zero, b.exact_zero);
  }
}

TEST(EvaluateTransform, InfiniteWindow) {
  const MeasureWindow w(kPeriodic4, 1, kInfiniteLevel);
  EXPECT_TRUE(evaluate_transform(w, 2).exact_zero);
  EXPECT_EQ(evaluate_transform(w, 0).value, std::complex<double>(1.0, 0.0));
  // Reference: long-double direct product over 40 levels (tail below 1e-20).
  std::vector<oracle::Level> levels(40, {4, 2, 1});
  for (const Rational xi : {q(1, 3), Rational(1), q(7, 5), Rational(-3)}) {
    const auto v = evaluate_transform(w, xi, 1e-10);
    const auto want = oracle::transform(levels, 1, 40, static_cast<long double>(xi.to_double()));
    EXPECT_LE(std::abs(v.value - std::complex<double>(static_cast<double>(want.real()),
                                                      static_cast<double>(want.imag()))),
              1e-10);
    EXPECT_LE(v.error_bound, 1e-10);
  }
}

TEST(EvaluateTransform, RejectsUnreachablePrecision) {
  const MeasureWindow w(kPeriodic4, 1, kInfiniteLevel);
  EXPECT_THROW(evaluate_transform(w, 1, 1e-16), ResourceLimit);
  EXPECT_THROW(evaluate_transform(w, 1, 0.0), InputError);
}

TEST(TruncationLevel, IsTheFirstLevelMeetingTheBound) {
  const MoranSystem sys = MoranSystem::periodic({3}, {2}, {5, 4}, {3, 2});
  const MeasureWindow w(sys, 1, kInfiniteLevel);
  // tail[n] = sum_{k > n} (N_k - 1) / B_k, summed far enough to be exact in long double.
  std::vector<long double> term(400, 0);
  long double b = 1;
  for (std::size_t k = 1; k < term.size(); ++k) {
    b *= sys.level(k).base.get_si();
    term[k] = (sys.level(k).count.get_si() - 1) / b;
  }
  auto tail = [&](std::size_t n) {
    long double t = 0;
    for (std::size_t k = term.size() - 1; k > n; --k) t += term[k];
    return t;
  };
  for (const double eps : {1e-6, 1e-9, 1e-12}) {
    for (const Rational xi : {q(1, 7), Rational(5), Rational(-40)}) {
      const std::size_t n = truncation_level(w, xi, eps);
      const long double scale = oracle::kPi * std::abs(static_cast<long double>(xi.to_double()));
      EXPECT_LE(static_cast<double>(scale * tail(n)), eps / 2);
      if (n > 0) EXPECT_GT(static_cast<double>(scale * tail(n - 1)), eps / 2 * (1 - 1e-9));
    }
  }
}

TEST(ZeroStratum, Examples) {
  const MeasureWindow inf(kPeriodic4, 1, kInfiniteLevel);
  EXPECT_EQ(zero_stratum(inf, 2), (ZeroStratumHit{1, 1}));
  EXPECT_EQ(zero_stratum(inf, 8), (ZeroStratumHit{2, 1}));
  EXPECT_FALSE(zero_stratum(inf, 4).has_value());
  EXPECT_EQ(zero_stratum(MeasureWindow::head(kSys46, 2), q(4, 3)), (ZeroStratumHit{1, 1}));
  EXPECT_THROW(zero_stratum(inf, 0), InputError);
  const auto hit = zero_stratum(inf, 2 * 4 * 4 * 4 * 3);
  ASSERT_TRUE(hit);
  EXPECT_EQ(hit->level, 4u);
  EXPECT_EQ(stratum_point(kPeriodic4, *hit), Rational(384));
}

TEST(ZeroStratum, SymmetricAndReconstructs) {
  std::mt19937 rng(17);
  const MeasureWindow w(MoranSystem::periodic({4}, {3}, {6, 2}, {3, 2}), 1, kInfiniteLevel);
  for (int i = 0; i < 5000; ++i) {
    const Rational lambda = random_rational(rng, 200, 6);
    if (lambda.is_zero()) continue;
    const auto a = zero_stratum(w, lambda);
    const auto b = zero_stratum(w, -lambda);
    ASSERT_EQ(a.has_value(), b.has_value()) << lambda;
    if (!a) continue;
    EXPECT_EQ(a->level, b->level);
    EXPECT_EQ(stratum_point(w.system(), *a), lambda);
  }
}

TEST(ZeroStratum, AgreesWithDirectSummation) {
  std::mt19937 rng(19);
  std::vector<oracle::Level> levels{{4, 2}, {6, 3}, {3, 3}};
  const MoranSystem sys = MoranSystem::finite({4, 6, 3}, {2, 3, 3});
  const auto w = MeasureWindow::head(sys, 3);
  for (int i = 0; i < 10000; ++i) {
    const Rational lambda = random_rational(rng, 100, 6);
    if (lambda.is_zero()) continue;
    const bool oracle_zero =
        std::abs(oracle::transform(levels, 1, 3, static_cast<long double>(lambda.to_double()))) < 1e-12L;
    EXPECT_EQ(zero_stratum(w, lambda).has_value(), oracle_zero) << lambda;
    EXPECT_EQ(evaluate_transform(w, lambda).exact_zero, oracle_zero) << lambda;
  }
}

TEST(GridKernel, AgreesWithGeneralRoutines) {
  std::mt19937 rng(23);
  const MoranSystem sys({DigitLevel{4, 3, 1}, DigitLevel{6, 2, 3}, DigitLevel{5, 5, 2}}, NoTail{});
  const MeasureWindow w(sys, 1, 3);
  const Integer L = 60;
  const auto kernel = GridKernel::build(w, L);
  ASSERT_TRUE(kernel);
  std::uniform_int_distribution<std::int64_t> x(-100000, 100000);
  for (int i = 0; i < 5000; ++i) {
    const std::int64_t v = x(rng);
    if (v == 0) continue;
    const Rational xi(Integer(static_cast<long>(v)), L);
    const auto general = evaluate_transform(w, xi);
    const auto hit = zero_stratum(w, xi);
    const auto level = kernel->zero_level(v);
    EXPECT_EQ(level.has_value(), hit.has_value());
    if (hit) EXPECT_EQ(*level, hit->level);
    EXPECT_EQ(kernel->transform(v).exact_zero, general.exact_zero);
    EXPECT_NEAR(std::abs(kernel->transform(v).value - general.value), 0.0, 1e-13);
    EXPECT_NEAR(kernel->power(v), std::norm(general.value), 1e-13);
  }
}

TEST(MeasureWindowModel, Validation) {
  EXPECT_THROW(MeasureWindow(kSys44, 0, 2), InputError);
  EXPECT_THROW(MeasureWindow(kSys44, 2, 1), InputError);
  EXPECT_THROW(MeasureWindow(kSys44, 1, 3), InputError);
  EXPECT_THROW(MeasureWindow(kSys44, 1, kInfiniteLevel), InputError);
  EXPECT_THROW(MeasureWindow(MoranSystem({}, FormulaTail{3, 1, 2}), 1, kInfiniteLevel), InputError);
  EXPECT_EQ(MeasureWindow(kSys44, 2, 2).size(), 1u);
}
