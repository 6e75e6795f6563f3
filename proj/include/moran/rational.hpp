#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace moran {

using Integer = mpz_class;

/// Exact rational over unbounded integers, always in lowest terms with a
/// positive denominator (zero is 0/1).
class Rational {
public:
  Rational() = default;
  Rational(long value) : value_(value) {}
  Rational(int value) : value_(value) {}
  Rational(const Integer &value) : value_(value) {}
  Rational(const Integer &num, const Integer &den);
  explicit Rational(const mpq_class &value);

  static Rational from_double(double value);

  /// Accepts "p/q", "p", with optional sign and surrounding whitespace.
  static Rational parse(std::string_view text);

  Integer num() const { return value_.get_num(); }
  Integer den() const { return value_.get_den(); }
  const mpq_class &mpq() const { return value_; }

  bool is_zero() const { return sgn(value_) == 0; }
  bool is_integer() const { return value_.get_den() == 1; }
  int sign() const { return sgn(value_); }

  Integer floor() const;
  /// x - floor(x), in [0, 1).
  Rational frac() const;
  /// Representative of x modulo m in [0, m); m > 0.
  Rational mod(const Rational &m) const;
  Rational abs() const;

  double to_double() const { return value_.get_d(); }

  /// "p/q", or "p" when the denominator is 1.
  std::string str() const;

  Rational &operator+=(const Rational &o) { value_ += o.value_; return *this; }
  Rational &operator-=(const Rational &o) { value_ -= o.value_; return *this; }
  Rational &operator*=(const Rational &o) { value_ *= o.value_; return *this; }
  Rational &operator/=(const Rational &o);

  friend Rational operator+(Rational a, const Rational &b) { return a += b; }
  friend Rational operator-(Rational a, const Rational &b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational &b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational &b) { return a /= b; }
  Rational operator-() const { return Rational(mpq_class(-value_)); }

  friend bool operator==(const Rational &a, const Rational &b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const Rational &a, const Rational &b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::size_t hash() const;

private:
  mpq_class value_;
};

std::ostream &operator<<(std::ostream &os, const Rational &r);

Integer gcd(const Integer &a, const Integer &b);
Integer lcm(const Integer &a, const Integer &b);

/// Exact conversion; throws InputError if the value does not fit.
std::int64_t to_int64(const Integer &value);

} // namespace moran

template <> struct std::hash<moran::Rational> {
  std::size_t operator()(const moran::Rational &r) const noexcept { return r.hash(); }
};
