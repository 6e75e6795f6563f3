#pragma once

// Brute-force reference computations shared by the test suites. They work
// from the definitions (direct sums, enumeration) and never call the
// library's evaluation or decision routines.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

struct Level {
  long b;
  long n;
  long a = 1;
};

using cld = std::complex<long double>;
constexpr long double kPi = 3.141592653589793238462643383279502884L;

/// mu_hat of levels first..last (1-based) at xi by direct summation.
inline cld transform(const std::vector<Level> &levels, std::size_t first, std::size_t last,
                     long double xi) {
  long double product = 1;
  for (std::size_t k = 1; k < first; ++k) product *= levels[k - 1].b;
  cld value = 1;
  for (std::size_t k = first; k <= last; ++k) {
    const Level &lv = levels[k - 1];
    product *= lv.b;
    cld sum = 0;
    for (long j = 0; j < lv.n; ++j) sum += std::polar(1.0L, -2 * kPi * j * lv.a * xi / product);
    value *= sum / static_cast<long double>(lv.n);
  }
  return value;
}

/// Atom coordinates times B_last, with multiplicity, by nested enumeration.
inline std::vector<long> atoms(const std::vector<Level> &levels, std::size_t first, std::size_t last) {
  std::vector<long> out{0};
  for (std::size_t k = first; k <= last; ++k) {
    const Level &lv = levels[k - 1];
    std::vector<long> next;
    for (long x : out)
      for (long d = 0; d < lv.n; ++d) next.push_back(x * lv.b + lv.a * d);
    out = next;
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::size_t distinct_atoms(const std::vector<Level> &levels, std::size_t first, std::size_t last) {
  const auto a = atoms(levels, first, last);
  return std::set<long>(a.begin(), a.end()).size();
}

/// Spectrum test for small finite windows: the exponentials restricted to the
/// atoms are pairwise orthogonal (Gram matrix of the discrete measure is the
/// identity) and their number equals the number of atoms.
inline bool gram_spectrum(const std::vector<Level> &levels, std::size_t last,
                          const std::vector<long double> &lambda) {
  if (lambda.size() != distinct_atoms(levels, 1, last)) return false;
  for (std::size_t i = 0; i < lambda.size(); ++i)
    for (std::size_t j = i + 1; j < lambda.size(); ++j)
      if (std::abs(transform(levels, 1, last, lambda[j] - lambda[i])) > 1e-9L) return false;
  return true;
}

/// Residue classes of D modulo s.
inline std::vector<long> residue_counts(const std::vector<long> &digits, long s) {
  std::vector<long> c(static_cast<std::size_t>(s), 0);
  for (long d : digits) ++c[static_cast<std::size_t>(d % s)];
  return c;
}

/// Phi_{p^k} divides the mask polynomial iff every class j mod p^{k-1} is
/// split evenly among its p lifts modulo p^k.
inline bool cyclotomic_divides(const std::vector<long> &digits, long p, long k) {
  long s = 1;
  for (long i = 0; i < k; ++i) s *= p;
  const long t = s / p;
  const auto c = residue_counts(digits, s);
  for (long j = 0; j < t; ++j)
    for (long i = 1; i < p; ++i)
      if (c[static_cast<std::size_t>(j + i * t)] != c[static_cast<std::size_t>(j)]) return false;
  return true;
}

/// All B subsets of [0, m) with D + B = Z_m, by exhaustive subset enumeration.
inline std::vector<std::vector<long>> all_complements(const std::vector<long> &digits, long m) {
  std::vector<std::vector<long>> out;
  if (m % static_cast<long>(digits.size())) return out;
  const long size = m / static_cast<long>(digits.size());
  std::vector<long> pick;
  auto rec = [&](auto &&self, long next) -> void {
    if (static_cast<long>(pick.size()) == size) {
      std::vector<int> hit(static_cast<std::size_t>(m), 0);
      for (long d : digits)
        for (long b : pick)
          if (hit[static_cast<std::size_t>((d + b) % m)]++) return;
      out.push_back(pick);
      return;
    }
    for (long x = next; x < m; ++x) {
      pick.push_back(x);
      self(self, x + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

} // namespace oracle
