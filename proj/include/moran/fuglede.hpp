#pragma once

#include <optional>
#include <string>

#include "moran/spectra.hpp"
#include "moran/tiling.hpp"

namespace moran {

struct FugledeReport {
  std::size_t level = 0;
  SpectralVerdict verdict{SpectralVerdictKind::Spectral, 0};
  std::optional<CandidateSet> spectrum;
  std::optional<ComplementResult> complement;
  bool convolution_uniform = false;
  /// [0, N_1 / b_1]
  Rational interval_left;
  Rational interval_right;
  /// N_1 b_2 ... b_n, present with the complement.
  std::optional<std::int64_t> length;
  /// Sup-norm gap between the CDF of the uniform atoms {0..L-1}/B_n and the
  /// linear CDF of the interval, computed at every jump point.
  std::optional<Rational> kolmogorov_distance;
};

/// Scales must be 1.
FugledeReport fuglede_report(const MoranSystem &system, std::size_t n);

/// Exact sup |F - G| where F is the CDF of the uniform measure on the atoms
/// x / scale and G the uniform CDF on [0, right].
Rational kolmogorov_distance(const std::vector<std::int64_t> &atoms, const Integer &scale,
                             const Rational &right);

std::string format_fuglede_text(const FugledeReport &report);
std::string format_fuglede_json(const FugledeReport &report);

} // namespace moran
