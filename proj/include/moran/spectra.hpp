#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "moran/fourier.hpp"
#include "moran/rational.hpp"
#include "moran/system.hpp"

namespace moran {

/// Finite, strictly sorted, duplicate-free set of rationals.
class CandidateSet {
public:
  CandidateSet() = default;
  explicit CandidateSet(std::vector<Rational> elements);
  CandidateSet(std::initializer_list<Rational> elements)
      : CandidateSet(std::vector<Rational>(elements)) {}

  const std::vector<Rational> &elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  bool contains(const Rational &x) const;
  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  /// Every element multiplied by c (c != 0).
  CandidateSet scaled(const Rational &c) const;

  friend bool operator==(const CandidateSet &, const CandidateSet &) = default;

private:
  std::vector<Rational> elements_;
};

// Candidate-set text files: one rational per line, '#' starts a comment.
CandidateSet parse_candidate_set(std::string_view text);
CandidateSet load_candidate_set(const std::string &path);
std::string format_candidate_set(const CandidateSet &set);

using RationalPair = std::pair<Rational, Rational>;

struct BiZeroCheck {
  bool bizero = true;
  /// First pair (in sorted order) whose difference is not a zero of the transform.
  std::optional<RationalPair> violation;
};

BiZeroCheck is_bizero(const MeasureWindow &window, const CandidateSet &set);

enum class SpectrumStatus { Spectrum, OrthogonalityFail, CardinalityFail };

struct SpectrumCertificate {
  std::size_t first = 1;
  std::size_t last = 1;
  CandidateSet set;
  /// Distinct atoms of the window's discrete measure.
  std::size_t atom_count = 0;
  /// True when several digit choices land on the same atom.
  bool atoms_collide = false;
  SpectrumStatus status = SpectrumStatus::CardinalityFail;
  std::optional<RationalPair> violation;

  bool is_spectrum() const { return status == SpectrumStatus::Spectrum; }
};

/// Finite windows only.
SpectrumCertificate is_spectrum(const MeasureWindow &window, const CandidateSet &set);

/// sum_k (B_k / (a_k N_k)) {0, ..., N_k - 1} for k = 1..n, verified before
/// returning. Throws NotSpectralError(j) for the first j >= 2 with N_j not
/// dividing b_j.
CandidateSet canonical_spectrum(const MoranSystem &system, std::size_t n);

enum class SpectralVerdictKind { Spectral, NotSpectral, UnknownBeyondHorizon };

struct SpectralVerdict {
  SpectralVerdictKind kind;
  /// Failing level for NotSpectral; last level examined for UnknownBeyondHorizon.
  std::size_t level = 0;

  friend bool operator==(const SpectralVerdict &, const SpectralVerdict &) = default;
};

/// Divisibility N_j | b_j for 2 <= j <= n (n may be kInfiniteLevel). Formula
/// tails with growing counts are scanned for formula_horizon levels past the prefix.
SpectralVerdict truncation_spectral_verdict(const MoranSystem &system, std::size_t n,
                                            std::size_t formula_horizon = 256);

std::string to_string(SpectralVerdict v);
std::string to_string(SpectrumStatus s);

/// Greedy ascending scan starting from {0}.
CandidateSet maximal_bizero_subset(const MeasureWindow &head, const CandidateSet &set);

/// #C == N and C reduces modulo 1 onto {0, 1/N, ..., (N-1)/N}.
bool single_factor_spectrum_check(long count, const CandidateSet &set);

struct QValue {
  double value = 0.0;
  double error = 0.0;
};

struct QSample {
  Rational xi;
  double q = 0.0;
  double error = 0.0;
};

QValue q_function(const MeasureWindow &window, const CandidateSet &set, const Rational &xi,
                  double eps = 1e-12);

/// Samples xi = from, from + step, ... while xi <= to, in order.
std::vector<QSample> q_grid(const MeasureWindow &window, const CandidateSet &set,
                            const Rational &from, const Rational &to, const Rational &step,
                            double eps = 1e-12, unsigned threads = 0);

struct SearchOptions {
  std::size_t vertex_budget = 5000;
  std::size_t node_budget = 50'000'000;
};

/// Exhaustive clique search for a spectrum containing 0 on a finite window.
/// Returns the lexicographically smallest one in [0, B_last); throws
/// ResourceLimit when a budget is exceeded.
std::optional<CandidateSet> spectrum_search(const MeasureWindow &window,
                                            const SearchOptions &options = {});

// Suitable decompositions of a spectrum of levels 1..n split at k.

struct DecompositionResult {
  MoranSystem system;
  std::size_t level;
  std::size_t split;
  CandidateSet spectrum;
  /// Maximal bi-zero subset for levels 1..split.
  CandidateSet anchors;
  std::map<Rational, CandidateSet> parts;
  /// Parts are pairwise disjoint and cover the spectrum.
  bool partition = false;
};

DecompositionResult suitable_decomposition(const MoranSystem &system, std::size_t n, std::size_t k,
                                           const CandidateSet &spectrum);

struct DecompositionReport {
  bool partition = false;
  bool anchors_spectrum = false;
  bool parts_spectra = false;
  bool containments = false;
  /// One line per failed clause, naming the clause and a witness.
  std::vector<std::string> failures;

  bool ok() const { return partition && anchors_spectrum && parts_spectra && containments; }
};

DecompositionReport verify_decomposition(const DecompositionResult &result);

} // namespace moran
