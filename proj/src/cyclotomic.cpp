#include <algorithm>

#include "moran/errors.hpp"
#include "moran/tiling.hpp"

namespace moran {

namespace {

void trim(Polynomial &p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

/// Exact quotient of a by the monic polynomial m (remainder must vanish).
Polynomial exact_quotient(Polynomial a, const Polynomial &m) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  if (a.size() <= dm) return {};
  Polynomial q(a.size() - dm, 0);
  for (std::size_t i = a.size(); i-- > dm;) {
    const std::int64_t c = a[i];
    if (c == 0) continue;
    q[i - dm] = c;
    for (std::size_t j = 0; j <= dm; ++j) a[i - dm + j] -= c * m[j];
  }
  return q;
}

std::int64_t prime_base(std::int64_t s) {
  for (std::int64_t p = 2; p * p <= s; ++p)
    if (s % p == 0) {
      while (s % p == 0) s /= p;
      return s == 1 ? p : 0;
    }
  return s;
}

} // namespace

Polynomial cyclotomic_polynomial(std::int64_t n) {
  if (n < 1) throw InputError("cyclotomic index must be positive");
  // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
  Polynomial p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = -1;
  p[static_cast<std::size_t>(n)] = 1;
  for (std::int64_t d = 1; d < n; ++d)
    if (n % d == 0) p = exact_quotient(p, cyclotomic_polynomial(d));
  return p;
}

Polynomial mask_polynomial(const std::vector<std::int64_t> &digits) {
  std::int64_t top = 0;
  for (auto d : digits) {
    if (d < 0) throw InputError("digits must be nonnegative");
    top = std::max(top, d);
  }
  Polynomial p(static_cast<std::size_t>(top) + 1, 0);
  for (auto d : digits) ++p[static_cast<std::size_t>(d)];
  return p;
}

Polynomial polynomial_remainder(Polynomial a, const Polynomial &m) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  for (std::size_t i = a.size(); i-- > dm;) {
    const std::int64_t c = a[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dm; ++j) a[i - dm + j] -= c * m[j];
  }
  a.resize(std::min(a.size(), dm));
  trim(a);
  return a;
}

bool cyclotomic_divides_mask(const std::vector<std::int64_t> &digits, std::int64_t s) {
  if (s < 1) throw InputError("cyclotomic index must be positive");
  // Reduce modulo x^s - 1 first; Phi_s divides it.
  Polynomial folded(static_cast<std::size_t>(s), 0);
  for (auto d : digits) {
    if (d < 0) throw InputError("digits must be nonnegative");
    ++folded[static_cast<std::size_t>(d % s)];
  }
  return polynomial_remainder(folded, cyclotomic_polynomial(s)).empty();
}

std::vector<std::int64_t> cyclotomic_prime_power_divisors(const std::vector<std::int64_t> &digits) {
  const Polynomial mask = mask_polynomial(digits);
  const std::int64_t degree = static_cast<std::int64_t>(mask.size()) - 1;
  std::vector<std::int64_t> out;
  // deg Phi_{p^k} = p^{k-1}(p - 1) >= s / 2, so s <= 2 deg + 2 covers every candidate.
  for (std::int64_t s = 2; s <= 2 * degree + 2; ++s) {
    const std::int64_t p = prime_base(s);
    if (p == 0 || s / p * (p - 1) > degree) continue;
    if (cyclotomic_divides_mask(digits, s)) out.push_back(s);
  }
  return out;
}

} // namespace moran
