#include "moran/rational.hpp"

#include <cctype>
#include <cmath>
#include <ostream>

#include "moran/errors.hpp"

namespace moran {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  std::size_t i = 0;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
  if (i == s.size()) throw InputError("malformed rational: '" + std::string(whole) + "'");
  for (std::size_t j = i; j < s.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(s[j])))
      throw InputError("malformed rational: '" + std::string(whole) + "'");
  }
  std::string digits(s.substr(s[0] == '+' ? 1 : 0));
  return Integer(digits, 10);
}

} // namespace

Rational::Rational(const Integer &num, const Integer &den) {
  if (den == 0) throw InputError("rational with zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rational::Rational(const mpq_class &value) : value_(value) { value_.canonicalize(); }

Rational Rational::from_double(double value) {
  if (!std::isfinite(value)) throw InputError("non-finite number");
  return Rational(mpq_class(value));
}

Rational Rational::parse(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw InputError("empty rational");
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(s, s));
  const Integer num = parse_integer(trim(s.substr(0, slash)), s);
  const std::string_view den_text = trim(s.substr(slash + 1));
  if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+'))
    throw InputError("malformed rational: '" + std::string(s) + "'");
  return Rational(num, parse_integer(den_text, s));
}

Rational &Rational::operator/=(const Rational &o) {
  if (o.is_zero()) throw InputError("division by zero");
  value_ /= o.value_;
  return *this;
}

Integer Rational::floor() const {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return q;
}

Rational Rational::frac() const { return *this - Rational(floor()); }

Rational Rational::mod(const Rational &m) const {
  const Rational q = *this / m;
  return *this - m * Rational(q.floor());
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(value_))); }

std::string Rational::str() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::size_t Rational::hash() const {
  const std::size_t h1 = mpz_fdiv_ui(value_.get_num_mpz_t(), 1000000007UL);
  const std::size_t h2 = mpz_fdiv_ui(value_.get_den_mpz_t(), 998244353UL);
  return h1 * 0x9e3779b97f4a7c15ULL ^ (h2 + (sign() < 0 ? 0x51ed27ULL : 0));
}

std::ostream &operator<<(std::ostream &os, const Rational &r) { return os << r.str(); }

Integer gcd(const Integer &a, const Integer &b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Integer lcm(const Integer &a, const Integer &b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

std::int64_t to_int64(const Integer &value) {
  if (!mpz_fits_slong_p(value.get_mpz_t()))
    throw InputError("integer out of 64-bit range: " + value.get_str());
  return value.get_si();
}

} // namespace moran
