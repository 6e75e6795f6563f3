#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "moran/rational.hpp"
#include "moran/system.hpp"

namespace moran {

/// Rounding allowance per Dirichlet factor (including the complex product step).
/// Arguments are reduced exactly before any floating-point operation, so the
/// observed error is a few ulps; this bound leaves a wide margin.
inline constexpr double kFactorRounding = 0x1p-48;

/// The partial convolution of levels first..last (last may be kInfiniteLevel).
class MeasureWindow {
public:
  MeasureWindow(MoranSystem system, std::size_t first, std::size_t last);

  /// Levels 1..n.
  static MeasureWindow head(const MoranSystem &system, std::size_t n) {
    return MeasureWindow(system, 1, n);
  }

  const MoranSystem &system() const { return system_; }
  std::size_t first() const { return first_; }
  std::size_t last() const { return last_; }
  bool is_infinite() const { return last_ == kInfiniteLevel; }
  /// Number of levels; only for finite windows.
  std::size_t size() const { return last_ - first_ + 1; }

private:
  MoranSystem system_;
  std::size_t first_;
  std::size_t last_;
};

/// lambda = B_k / (a_k N_k) * multiplier with multiplier not divisible by N_k.
struct ZeroStratumHit {
  std::size_t level;
  Integer multiplier;

  friend bool operator==(const ZeroStratumHit &, const ZeroStratumHit &) = default;
};

struct TransformValue {
  std::complex<double> value{1.0, 0.0};
  double error_bound = 0.0;
  bool exact_zero = false;
};

/// Membership of lambda in the level's zero stratum (B / (a N)) (Z \ N Z).
std::optional<Integer> stratum_multiplier(const DigitLevel &level, const Integer &product,
                                          const Rational &lambda);

/// Transform of the uniform measure on (a / B) {0, ..., N-1} at xi.
TransformValue factor_transform(const DigitLevel &level, const Integer &product, const Rational &xi);

/// Smallest level n* >= first - 1 whose tail bound
/// pi |xi| sum_{k > n*} (N_k - 1) a_k / B_k is at most eps / 2 (infinite windows).
std::size_t truncation_level(const MeasureWindow &window, const Rational &xi, double eps);

/// Throws ResourceLimit when eps is below what rounding allows.
TransformValue evaluate_transform(const MeasureWindow &window, const Rational &xi, double eps = 1e-12);

/// Smallest level of the window whose zero stratum contains lambda. Throws
/// InputError for lambda == 0.
std::optional<ZeroStratumHit> zero_stratum(const MeasureWindow &window, const Rational &lambda);

/// B_k / (a_k N_k) * multiplier.
Rational stratum_point(const MoranSystem &system, const ZeroStratumHit &hit);

/// Evaluates a finite window on the lattice (1/L) Z with machine integers.
/// Results agree exactly (zero decisions) and to rounding (values) with the
/// general routines above.
class GridKernel {
public:
  /// Empty when the window's moduli do not fit 64-bit arithmetic.
  static std::optional<GridKernel> build(const MeasureWindow &window, const Integer &denominator);

  const Integer &denominator() const { return denominator_; }

  /// Largest |x| for which the kernel is valid.
  static constexpr std::int64_t kMaxNumerator = std::int64_t{1} << 61;

  /// Smallest window level whose stratum contains x / L (x != 0).
  std::optional<std::size_t> zero_level(std::int64_t x) const;
  TransformValue transform(std::int64_t x) const;
  /// |transform|^2 with exact zeros reported as 0.
  double power(std::int64_t x) const;

  /// out[i] = sum over l of power(x0 + i dx + l), for i < count. Residues are
  /// precomputed per level so the inner loop does no division.
  std::vector<double> power_sums(std::int64_t x0, std::int64_t dx, std::size_t count,
                                 const std::vector<std::int64_t> &lambdas, unsigned threads = 0) const;

  struct ZeroModulus {
    std::size_t index;
    std::int64_t q;
    std::int64_t r;
  };
  /// Levels that can vanish, with their stratum moduli.
  std::vector<ZeroModulus> zero_moduli() const;

private:
  struct Level {
    std::size_t index;
    std::int64_t count;
    std::int64_t alpha;    // t = alpha * x / modulus
    std::int64_t modulus;
    std::int64_t zero_q;   // stratum: q | x and not r | x
    std::int64_t zero_r;   // 0 encodes "larger than any admissible x"
  };
  Integer denominator_;
  std::vector<Level> levels_;
};

} // namespace moran
