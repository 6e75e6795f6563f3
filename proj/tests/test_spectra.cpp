#include <gtest/gtest.h>

#include <random>

#include "moran/errors.hpp"
#include "moran/spectra.hpp"
#include "oracles.hpp"

using namespace moran;

namespace {

Rational q(long p, long d) { return Rational(Integer(p), Integer(d)); }

CandidateSet ints(std::initializer_list<long> xs) {
  std::vector<Rational> v;
  for (long x : xs) v.push_back(Rational(x));
  return CandidateSet(v);
}

std::vector<long double> as_ld(const CandidateSet &s) {
  std::vector<long double> out;
  for (const auto &x : s) out.push_back(static_cast<long double>(x.to_double()));
  return out;
}

const MoranSystem kSys44 = MoranSystem::finite({4, 4}, {2, 2});
const MoranSystem kSys23 = MoranSystem::finite({2, 3}, {2, 2});
const MoranSystem kSys66 = MoranSystem::finite({6, 6}, {3, 3});
const MoranSystem kSys46 = MoranSystem::finite({4, 6}, {3, 2});

// Lexicographically least spectrum containing 0 among grid points in
// [0, B_n) with denominator `grid`, by plain subset enumeration and numeric
// orthogonality. Returns numerators over `grid`.
std::optional<std::vector<long>> brute_force_spectrum(const std::vector<oracle::Level> &levels, long grid) {
  long bn = 1;
  for (const auto &lv : levels) bn *= lv.b;
  const std::size_t m = oracle::distinct_atoms(levels, 1, levels.size());
  std::vector<long> pick{0};
  auto zero = [&](long x) {
    return std::abs(oracle::transform(levels, 1, levels.size(), static_cast<long double>(x) / grid)) < 1e-9L;
  };
  auto rec = [&](auto &&self, long next) -> bool {
    if (pick.size() == m) return true;
    for (long i = next; i < bn * grid; ++i) {
      bool ok = true;
      for (long p : pick) ok = ok && zero(i - p);
      if (!ok) continue;
      pick.push_back(i);
      if (self(self, i + 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  if (rec(rec, 0)) return pick;
  return std::nullopt;
}

} // namespace

TEST(CandidateSetModel, SortsAndDeduplicates) {
  const CandidateSet s{Rational(3), q(1, 2), Rational(3), Rational(-1)};
  EXPECT_EQ(s.elements(), (std::vector<Rational>{Rational(-1), q(1, 2), Rational(3)}));
  EXPECT_TRUE(s.contains(q(2, 4)));
  EXPECT_EQ(s.scaled(Rational(2)), (CandidateSet{Rational(-2), Rational(1), Rational(6)}));
  EXPECT_THROW(s.scaled(Rational(0)), InputError);
}

TEST(CandidateSetModel, TextFormat) {
  const auto s = parse_candidate_set("# header\n10\n 2/4 # half\n\n0\n-3/6\n");
  EXPECT_EQ(s, (CandidateSet{q(-1, 2), Rational(0), q(1, 2), Rational(10)}));
  EXPECT_EQ(format_candidate_set(s), "-1/2\n0\n1/2\n10\n");
  EXPECT_EQ(parse_candidate_set(format_candidate_set(s)), s);
  EXPECT_THROW(parse_candidate_set("0\n1/0\n"), InputError);
  EXPECT_THROW(parse_candidate_set("zero\n"), InputError);
}

TEST(BiZero, Examples) {
  const auto w = MeasureWindow::head(kSys44, 2);
  EXPECT_TRUE(is_bizero(w, ints({0, 2, 8, 10})).bizero);
  const auto bad = is_bizero(w, ints({0, 4}));
  EXPECT_FALSE(bad.bizero);
  ASSERT_TRUE(bad.violation);
  EXPECT_EQ(*bad.violation, (RationalPair{Rational(0), Rational(4)}));
  EXPECT_TRUE(is_bizero(w, ints({0})).bizero);
  // First violating pair in sorted order.
  const auto later = is_bizero(w, ints({0, 2, 10, 12}));
  EXPECT_EQ(*later.violation, (RationalPair{Rational(0), Rational(12)}));
}

TEST(IsSpectrum, Examples) {
  const auto w = MeasureWindow::head(kSys44, 2);
  const auto full = is_spectrum(w, ints({0, 2, 8, 10}));
  EXPECT_EQ(full.status, SpectrumStatus::Spectrum);
  EXPECT_EQ(full.atom_count, 4u);
  EXPECT_FALSE(full.atoms_collide);
  EXPECT_EQ(is_spectrum(w, ints({0, 2})).status, SpectrumStatus::CardinalityFail);
  EXPECT_EQ(is_spectrum(w, ints({0, 1, 2, 3})).status, SpectrumStatus::OrthogonalityFail);
  EXPECT_TRUE(is_spectrum(MeasureWindow::head(MoranSystem::finite({4}, {2}), 1), ints({0, 2})).is_spectrum());
  EXPECT_THROW(is_spectrum(MeasureWindow(MoranSystem::periodic({}, {}, {4}, {2}), 1, kInfiniteLevel),
                           ints({0, 2})),
               InputError);
}

TEST(IsSpectrum, CollidingAtomsAreCountedOnce) {
  // {0,1,2} + 2{0,1}: atoms 0..4 with 2 twice.
  const auto sys = MoranSystem::finite({2, 2}, {2, 3});
  const auto cert = is_spectrum(MeasureWindow::head(sys, 2), ints({0}));
  EXPECT_TRUE(cert.atoms_collide);
  EXPECT_EQ(cert.atom_count, 5u);
}

TEST(IsSpectrum, AgreesWithGramOracle) {
  std::mt19937 rng(29);
  const std::vector<oracle::Level> levels{{4, 2}, {4, 2}};
  // All 4-subsets of {0, 1/2, ..., 31/2} containing 0, sampled.
  std::uniform_int_distribution<long> pt(1, 31);
  int spectra = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    std::vector<Rational> v{Rational(0)};
    for (int i = 0; i < 3; ++i) v.push_back(q(pt(rng), 2));
    if (trial % 3 == 0) v = {Rational(0), Rational(2 * pt(rng) % 16), Rational(8), Rational(10)};
    const CandidateSet s(v);
    const bool got = is_spectrum(MeasureWindow::head(kSys44, 2), s).is_spectrum();
    EXPECT_EQ(got, oracle::gram_spectrum(levels, 2, as_ld(s)));
    spectra += got;
  }
  EXPECT_GT(spectra, 0);
}

TEST(CanonicalSpectrum, Examples) {
  EXPECT_EQ(canonical_spectrum(kSys44, 2), ints({0, 2, 8, 10}));
  EXPECT_EQ(canonical_spectrum(kSys66, 2), ints({0, 2, 4, 12, 14, 16, 24, 26, 28}));
  EXPECT_EQ(canonical_spectrum(kSys46, 2),
            (CandidateSet{Rational(0), q(4, 3), q(8, 3), Rational(12), q(40, 3), q(44, 3)}));
  try {
    canonical_spectrum(kSys23, 2);
    FAIL() << "expected NotSpectralError";
  } catch (const NotSpectralError &e) {
    EXPECT_EQ(e.level(), 2u);
  }
}

TEST(CanonicalSpectrum, PassesGramOracle) {
  const std::vector<std::vector<oracle::Level>> cases{
      {{4, 2}, {4, 2}}, {{6, 3}, {6, 3}}, {{4, 3}, {6, 2}}, {{3, 5}, {4, 2}, {6, 3}}, {{2, 2}, {2, 2}, {2, 2}}};
  for (const auto &levels : cases) {
    std::vector<long> b, n;
    for (const auto &lv : levels) b.push_back(lv.b), n.push_back(lv.n);
    const auto sys = MoranSystem::finite(b, n);
    const auto s = canonical_spectrum(sys, levels.size());
    EXPECT_TRUE(oracle::gram_spectrum(levels, levels.size(), as_ld(s)));
  }
}

TEST(SpectralVerdict, Examples) {
  const auto p = MoranSystem::periodic({4}, {3}, {6}, {6});
  EXPECT_EQ(truncation_spectral_verdict(p, kInfiniteLevel).kind, SpectralVerdictKind::Spectral);
  const auto bad = MoranSystem::periodic({}, {}, {6}, {4});
  EXPECT_EQ(truncation_spectral_verdict(bad, kInfiniteLevel), (SpectralVerdict{SpectralVerdictKind::NotSpectral, 2}));
  EXPECT_EQ(truncation_spectral_verdict(kSys23, 2), (SpectralVerdict{SpectralVerdictKind::NotSpectral, 2}));
  EXPECT_EQ(truncation_spectral_verdict(kSys23, 1).kind, SpectralVerdictKind::Spectral);
  // The bad level sits late in the period.
  const auto late = MoranSystem::periodic({4}, {2}, {4, 4, 6}, {2, 2, 4});
  EXPECT_EQ(truncation_spectral_verdict(late, kInfiniteLevel).level, 4u);
  // Period starting at level 1: its first level recurs at level 1 + P.
  const auto wrap = MoranSystem::periodic({}, {}, {6, 4}, {4, 2});
  EXPECT_EQ(truncation_spectral_verdict(wrap, kInfiniteLevel).level, 3u);
}

TEST(SpectralVerdict, FormulaTails) {
  // Constant count 3 with base 6 from level 1 on.
  EXPECT_EQ(truncation_spectral_verdict(MoranSystem({}, FormulaTail{6, 3, 1}), kInfiniteLevel).kind,
            SpectralVerdictKind::Spectral);
  EXPECT_EQ(truncation_spectral_verdict(MoranSystem({}, FormulaTail{3, 2, 1}), kInfiniteLevel),
            (SpectralVerdict{SpectralVerdictKind::NotSpectral, 2}));
  EXPECT_EQ(truncation_spectral_verdict(MoranSystem({}, FormulaTail{2, 1, 2}), kInfiniteLevel),
            (SpectralVerdict{SpectralVerdictKind::NotSpectral, 2}));
  // Growing counts that divide the base as far as we look: N_n = 2 while c rho^n < 2.5.
  const auto slow = MoranSystem({}, FormulaTail{4, q(1, 1000000), q(11, 10)});
  const auto v = truncation_spectral_verdict(slow, kInfiniteLevel, 64);
  EXPECT_EQ(v.kind, SpectralVerdictKind::UnknownBeyondHorizon);
  EXPECT_EQ(v.level, 65u);
  EXPECT_THROW(truncation_spectral_verdict(kSys44, kInfiniteLevel), InputError);
}

TEST(MaximalBiZero, Examples) {
  const auto s = ints({0, 2, 8, 10});
  EXPECT_EQ(maximal_bizero_subset(MeasureWindow::head(kSys44, 1), s), ints({0, 2}));
  EXPECT_EQ(maximal_bizero_subset(MeasureWindow::head(kSys44, 2), s), s);
  EXPECT_EQ(maximal_bizero_subset(MeasureWindow::head(kSys44, 1), ints({0})), ints({0}));
  EXPECT_THROW(maximal_bizero_subset(MeasureWindow::head(kSys44, 1), ints({2, 8})), InputError);
}

TEST(SingleFactor, Examples) {
  EXPECT_TRUE(single_factor_spectrum_check(2, CandidateSet{Rational(0), q(1, 2)}));
  EXPECT_TRUE(single_factor_spectrum_check(2, CandidateSet{Rational(0), q(3, 2)}));
  EXPECT_TRUE(single_factor_spectrum_check(3, CandidateSet{Rational(0), q(1, 3), q(5, 3)}));
  EXPECT_FALSE(single_factor_spectrum_check(3, CandidateSet{Rational(0), q(1, 3), q(4, 3)}));
  EXPECT_FALSE(single_factor_spectrum_check(3, CandidateSet{Rational(0), q(1, 3)}));
  EXPECT_THROW(single_factor_spectrum_check(2, CandidateSet{q(1, 2), Rational(1)}), InputError);
}

TEST(SingleFactor, MatchesGramOracle) {
  // The uniform measure on {0, ..., N-1}: base 1 makes the oracle's phase j * xi.
  for (long n = 2; n <= 3; ++n) {
    const std::vector<oracle::Level> levels{{1, n}};
    for (long a = 1; a < 3 * n; ++a) {
      if (n == 2) {
        const CandidateSet c{Rational(0), q(a, n)};
        EXPECT_EQ(single_factor_spectrum_check(n, c), oracle::gram_spectrum(levels, 1, as_ld(c)));
        continue;
      }
      for (long b = a + 1; b < 3 * n; ++b) {
        const CandidateSet c{Rational(0), q(a, n), q(b, n)};
        EXPECT_EQ(single_factor_spectrum_check(n, c), oracle::gram_spectrum(levels, 1, as_ld(c)));
      }
    }
  }
}

TEST(QFunction, Values) {
  const auto w = MeasureWindow::head(kSys44, 2);
  const auto half = q_function(w, ints({0, 2}), 1);
  const double expected = std::pow(std::cos(M_PI / 4) * std::cos(M_PI / 16), 2) +
                          std::pow(std::cos(3 * M_PI / 4) * std::cos(3 * M_PI / 16), 2);
  EXPECT_NEAR(half.value, expected, 1e-12);
  EXPECT_NEAR(half.value, 0.8266, 1e-4);
  EXPECT_EQ(q_function(w, ints({0, 2}), 0).value, 1.0);
  EXPECT_NEAR(q_function(w, ints({0, 2, 8, 10}), q(3, 7)).value, 1.0, 1e-12);
}

TEST(QGrid, SpectrumGivesOne) {
  const auto w = MeasureWindow::head(kSys44, 2);
  const auto samples = q_grid(w, ints({0, 2, 8, 10}), 0, 1, q(1, 1000));
  ASSERT_EQ(samples.size(), 1001u);
  EXPECT_EQ(samples.front().xi, Rational(0));
  EXPECT_EQ(samples.back().xi, Rational(1));
  for (const auto &s : samples) EXPECT_NEAR(s.q, 1.0, 1e-9) << s.xi;
}

TEST(QGrid, LatticeAndGeneralPathsAgree) {
  const auto w = MeasureWindow::head(kSys46, 2);
  const auto lambda = canonical_spectrum(kSys46, 2);
  const auto bi = CandidateSet{Rational(0), q(4, 3)};
  const auto grid = q_grid(w, bi, -3, 3, q(1, 7), 1e-12, 1);
  for (const auto &s : grid) {
    EXPECT_NEAR(s.q, q_function(w, bi, s.xi).value, 1e-13);
    EXPECT_LE(s.q, 1 + 1e-9);
  }
  for (const auto &s : q_grid(w, lambda, -3, 3, q(1, 7))) EXPECT_NEAR(s.q, 1.0, 1e-9);
}

TEST(QGrid, IndependentOfThreadCount) {
  const auto w = MeasureWindow::head(kSys66, 2);
  const auto lambda = ints({0, 2, 4, 12});
  const auto one = q_grid(w, lambda, 0, 5, q(1, 97), 1e-12, 1);
  for (unsigned t : {2u, 3u, 8u}) {
    const auto many = q_grid(w, lambda, 0, 5, q(1, 97), 1e-12, t);
    ASSERT_EQ(many.size(), one.size());
    for (std::size_t i = 0; i < one.size(); ++i) EXPECT_EQ(many[i].q, one[i].q);
  }
}

TEST(QGrid, InfiniteWindowStaysBelowOne) {
  const MeasureWindow w(MoranSystem::periodic({}, {}, {4}, {2}), 1, kInfiniteLevel);
  const auto lambda = ints({0, 2, 8, 10, 32, 34, 40, 42});
  for (const auto &s : q_grid(w, lambda, 0, 1, q(1, 20), 1e-10)) {
    EXPECT_LE(s.q, 1 + 1e-9);
    EXPECT_LE(s.error, 8 * (2e-10 + 1e-20) + 1e-12);
  }
  EXPECT_TRUE(q_grid(w, lambda, 1, 0, q(1, 2)).empty());
  EXPECT_THROW(q_grid(w, lambda, 0, 1, 0), InputError);
}

TEST(SpectrumSearch, Examples) {
  EXPECT_EQ(spectrum_search(MeasureWindow::head(kSys44, 2)), ints({0, 2, 8, 10}));
  EXPECT_FALSE(spectrum_search(MeasureWindow::head(kSys23, 2)).has_value());
  EXPECT_EQ(spectrum_search(MeasureWindow::head(MoranSystem::finite({4}, {2}), 1)), ints({0, 2}));
}

TEST(SpectrumSearch, AgreesWithSubsetEnumeration) {
  const std::vector<std::vector<oracle::Level>> cases{
      {{4, 2}, {4, 2}}, {{2, 2}, {3, 2}}, {{3, 3}, {2, 2}}, {{2, 2}, {4, 2}}, {{3, 2}, {3, 3}}, {{4, 3}, {2, 2}}};
  for (const auto &levels : cases) {
    std::vector<long> b, n;
    long grid = 1;
    for (const auto &lv : levels) b.push_back(lv.b), n.push_back(lv.n), grid = std::lcm(grid, lv.n);
    const auto got = spectrum_search(MeasureWindow::head(MoranSystem::finite(b, n), levels.size()));
    const auto want = brute_force_spectrum(levels, grid);
    ASSERT_EQ(got.has_value(), want.has_value());
    if (!got) continue;
    std::vector<long> numerators;
    for (const auto &x : *got) {
      const Rational scaled = x * Rational(grid);
      ASSERT_TRUE(scaled.is_integer());
      numerators.push_back(scaled.num().get_si());
    }
    EXPECT_EQ(numerators, *want);
  }
}

TEST(SpectrumSearch, Budget) {
  SearchOptions tiny;
  tiny.vertex_budget = 3;
  EXPECT_THROW(spectrum_search(MeasureWindow::head(kSys44, 2), tiny), ResourceLimit);
  EXPECT_THROW(spectrum_search(MeasureWindow(MoranSystem::periodic({}, {}, {4}, {2}), 1, kInfiniteLevel)),
               InputError);
}
