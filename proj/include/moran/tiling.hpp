#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "moran/system.hpp"

namespace moran {

/// D_n + b_n D_{n-1} + ... + b_2...b_n D_1 with level scales applied.
struct IteratedDigitSet {
  std::size_t level = 0;
  /// Sorted, with multiplicity.
  std::vector<std::int64_t> elements;
  bool direct_sum = true;
  /// a_1 N_1 b_2 ... b_n.
  std::int64_t span = 1;
};

IteratedDigitSet iterated_digits(const MoranSystem &system, std::size_t n);
IteratedDigitSet iterated_digits(const std::vector<DigitLevel> &levels);

/// Exact counting: every s in [0, length) has exactly one representation d + c
/// and no sum falls outside.
bool convolve_uniform_check(const IteratedDigitSet &digits, const IteratedDigitSet &complement,
                            std::int64_t length);

struct ComplementResult {
  /// C_1 = {0}, C_j = N_j {0, ..., b_j / N_j - 1}.
  std::vector<DigitLevel> levels;
  /// Absent when every complement level is a single point.
  std::optional<MoranSystem> system;
  IteratedDigitSet digits;
  IteratedDigitSet complement;
  /// N_1 b_2 ... b_n.
  std::int64_t length = 1;
  bool certified = false;
};

/// Scales must be 1. Throws NotSpectralError(j) when N_j does not divide b_j.
ComplementResult canonical_complement(const MoranSystem &system, std::size_t n);

// Cyclotomic helpers over integer coefficient vectors (index = degree).
using Polynomial = std::vector<std::int64_t>;

Polynomial cyclotomic_polynomial(std::int64_t n);
Polynomial mask_polynomial(const std::vector<std::int64_t> &digits);
/// Remainder of a modulo the monic polynomial m.
Polynomial polynomial_remainder(Polynomial a, const Polynomial &m);
/// Prime powers s = p^k with Phi_s dividing the mask polynomial, ascending.
std::vector<std::int64_t> cyclotomic_prime_power_divisors(const std::vector<std::int64_t> &digits);
bool cyclotomic_divides_mask(const std::vector<std::int64_t> &digits, std::int64_t s);

struct Tile {
  std::int64_t period;
  std::vector<std::int64_t> complement;
};

enum class NotTileReason { T1, T2, LocalPacking };

struct NotTile {
  /// Mask polynomial at 1, i.e. #D.
  std::int64_t mask_at_one;
  /// Product of Phi_s(1) over the prime-power divisors.
  std::int64_t product;
  std::vector<std::int64_t> prime_powers;
  NotTileReason reason = NotTileReason::T1;
  /// T2: product of two prime-power divisors whose cyclotomic polynomial misses the mask.
  std::int64_t missing = 0;
  /// LocalPacking: no exact packing of [-w, max D + w] contains D.
  std::int64_t window = 0;
};

struct TileUnknown {
  std::int64_t max_period;
};

using TileVerdict = std::variant<Tile, NotTile, TileUnknown>;

/// Digits must be distinct, nonnegative and contain 0. NotTile is certified by
/// T1, by T2 when #D has at most two prime factors, or by a failed local packing.
TileVerdict is_integer_tile(std::vector<std::int64_t> digits, std::int64_t max_period = 256,
                            unsigned threads = 0);

std::string format_tile_verdict(const TileVerdict &verdict);

/// True when every residue mod m is hit exactly once by a + b.
bool is_direct_tiling(const std::vector<std::int64_t> &a, const std::vector<std::int64_t> &b,
                      std::int64_t m);

struct RescaledTiling {
  /// r A reduced mod m, sorted.
  std::vector<std::int64_t> scaled;
  std::vector<std::int64_t> complement;
  std::int64_t period;
};

RescaledTiling tijdeman_rescale(const std::vector<std::int64_t> &a, const std::vector<std::int64_t> &b,
                                std::int64_t m, std::int64_t r);

// Digit-set files: one integer per line, '#' comments.
std::vector<std::int64_t> parse_digit_set(std::string_view text);
std::vector<std::int64_t> load_digit_set(const std::string &path);

std::string format_integer_list(const std::vector<std::int64_t> &values);

} // namespace moran
