#pragma once

// Uniform-digit factor (1/N) sum_{j<N} exp(-2 pi i j t) evaluated with every
// trigonometric argument reduced exactly, for t = p / q with integer p, q.

#include <cmath>
#include <complex>
#include <numbers>

#include "moran/rational.hpp"

namespace moran::detail {

using int128 = __int128;

inline int128 floor_mod(int128 a, int128 m) {
  int128 r = a % m;
  return r < 0 ? r + m : r;
}

inline Integer floor_mod(const Integer &a, const Integer &m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline double ratio(int128 p, int128 q) {
  return static_cast<double>(p) / static_cast<double>(q);
}

inline double ratio(const Integer &p, const Integer &q) {
  return mpq_class(p, q).get_d();
}

inline double as_double(int128 v) { return static_cast<double>(v); }
inline double as_double(const Integer &v) { return v.get_d(); }

inline bool is_zero(int128 v) { return v == 0; }
inline bool is_zero(const Integer &v) { return v == 0; }

// sin(pi p / q) for q > 0; the argument is folded into [0, 1/2] exactly.
template <typename Int> double sinpi(const Int &p, const Int &q) {
  const Int two_q = q * 2;
  Int r = floor_mod(p, two_q);
  double sign = 1.0;
  if (r > q || r == q) {
    r = r - q;
    sign = -1.0;
  }
  if (r * 2 > q) r = q - r;
  return sign * std::sin(std::numbers::pi * ratio(r, q));
}

// cos(pi p / q) for q > 0.
template <typename Int> double cospi(const Int &p, const Int &q) {
  const Int two_q = q * 2;
  Int r = floor_mod(p, two_q);
  if (r > q) r = two_q - r; // cos is even around 0 and 2 pi
  // r / q in [0, 1]; fold to [0, 1/2] with cos(pi - x) = -cos(x).
  if (r * 2 > q) return -std::cos(std::numbers::pi * ratio(q - r, q));
  return std::cos(std::numbers::pi * ratio(r, q));
}

struct FactorValue {
  std::complex<double> value{1.0, 0.0};
  bool exact_zero = false;
};

// t = p / q, q > 0, n >= 1.
template <typename Int> FactorValue dirichlet_factor(const Int &p, const Int &q, const Int &n) {
  FactorValue out;
  if (n == 1) return out;
  const Int u = floor_mod(p, q);
  if (is_zero(u)) return out;
  if (is_zero(floor_mod(Int(n * u), q))) {
    out.value = {0.0, 0.0};
    out.exact_zero = true;
    return out;
  }
  const double magnitude = sinpi(Int(n * u), q) / (as_double(n) * sinpi(u, q));
  const Int phase = (n - 1) * u;
  out.value = std::complex<double>(magnitude * cospi(phase, q), -magnitude * sinpi(phase, q));
  return out;
}

// |factor|^2 only.
template <typename Int> double dirichlet_power(const Int &p, const Int &q, const Int &n) {
  if (n == 1) return 1.0;
  const Int u = floor_mod(p, q);
  if (is_zero(u)) return 1.0;
  if (is_zero(floor_mod(Int(n * u), q))) return 0.0;
  const double m = sinpi(Int(n * u), q) / (as_double(n) * sinpi(u, q));
  return m * m;
}

} // namespace moran::detail
