#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "moran/rational.hpp"

namespace moran {

/// Window bound meaning "all levels".
inline constexpr std::size_t kInfiniteLevel = std::numeric_limits<std::size_t>::max();

/// Digit set scale * {0, ..., count - 1} placed at base `base`.
/// count == 1 is the trivial level {0}.
struct DigitLevel {
  Integer base;
  Integer count;
  Integer scale{1};

  friend bool operator==(const DigitLevel &, const DigitLevel &) = default;
};

struct NoTail {
  friend bool operator==(const NoTail &, const NoTail &) = default;
};

/// Levels after the prefix repeat `levels` forever.
struct PeriodicTail {
  std::vector<DigitLevel> levels;
  friend bool operator==(const PeriodicTail &, const PeriodicTail &) = default;
};

/// Levels after the prefix have constant base and count max(2, round(c * rho^n)),
/// n being the global level index.
struct FormulaTail {
  Integer base;
  Rational c;
  Rational rho;
  friend bool operator==(const FormulaTail &, const FormulaTail &) = default;
};

using Tail = std::variant<NoTail, PeriodicTail, FormulaTail>;

class MoranSystem {
public:
  /// Validates ranges; throws InputError.
  MoranSystem(std::vector<DigitLevel> prefix, Tail tail);

  /// Shorthand for a finite system with unit scales.
  static MoranSystem finite(const std::vector<long> &bases, const std::vector<long> &counts);
  /// Shorthand for a finite prefix followed by a periodic tail, unit scales.
  static MoranSystem periodic(const std::vector<long> &prefix_bases,
                              const std::vector<long> &prefix_counts,
                              const std::vector<long> &tail_bases,
                              const std::vector<long> &tail_counts);

  const std::vector<DigitLevel> &prefix() const { return prefix_; }
  const Tail &tail() const { return tail_; }

  bool has_periodic_tail() const { return std::holds_alternative<PeriodicTail>(tail_); }
  bool has_formula_tail() const { return std::holds_alternative<FormulaTail>(tail_); }
  bool is_finite() const { return std::holds_alternative<NoTail>(tail_); }

  /// Highest addressable level (the prefix length for finite systems).
  std::size_t horizon() const;
  bool is_addressable(std::size_t n) const { return n >= 1 && n <= horizon(); }

  /// Level n, 1-based. Throws InputError past the horizon.
  DigitLevel level(std::size_t n) const;

  /// True if every level (prefix and tail rule) has scale 1.
  bool unit_scales() const;

  friend bool operator==(const MoranSystem &, const MoranSystem &) = default;

private:
  std::vector<DigitLevel> prefix_;
  Tail tail_;
};

/// B_n = b_1 * ... * b_n.
Integer level_product(const MoranSystem &system, std::size_t n);
/// {B_1, ..., B_n}.
std::vector<Integer> level_products(const MoranSystem &system, std::size_t n);

enum class Convergence { Convergent, Divergent, Unknown };
enum class ConvergenceCertificate {
  GeometricRatio,
  RatioTest,
  NonvanishingTerms,
  BoundedByCorollary,
  FinitePrefix,
};

struct ConvergenceReport {
  Convergence verdict;
  /// Sum of N_n / B_n: exact when `sum_exact`, otherwise an upper bound.
  std::optional<Rational> sum;
  bool sum_exact = false;
  ConvergenceCertificate certificate;
  std::string note;
};

ConvergenceReport check_convergence(const MoranSystem &system);

struct SupportInfo {
  Rational left{0};
  Rational diameter;
  /// Atom spacing 1 / B_n of the window (0 for the infinite window).
  Rational resolution;
};

/// n may be kInfiniteLevel (periodic tails only).
SupportInfo support_info(const MoranSystem &system, std::size_t n);

/// Sum over levels k >= 1 of term(level_k) / B_k, closed form for periodic tails.
Rational periodic_series(const MoranSystem &system,
                         const std::function<Rational(const DigitLevel &)> &term);

/// Multiset (sorted) of B_last * atoms of the window first..last, i.e.
/// sum_k scale_k d_k B_last / B_k. Throws InputError on 64-bit overflow
/// and ResourceLimit if the product of counts exceeds `max_atoms`.
std::vector<std::int64_t> scaled_atoms(const MoranSystem &system, std::size_t first,
                                       std::size_t last, std::size_t max_atoms = 1u << 24);

std::string to_string(Convergence v);
std::string to_string(ConvergenceCertificate c);

// JSON system documents.
MoranSystem parse_system(std::string_view text);
std::string serialize_system(const MoranSystem &system);
MoranSystem load_system(const std::string &path);

} // namespace moran
