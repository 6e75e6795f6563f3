#include "moran/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dirichlet.hpp"
#include "moran/errors.hpp"
#include "moran/parallel.hpp"

namespace moran {

namespace {

// pi rounded up, so tail bounds stay upper bounds.
constexpr double kPiUpper = 3.1415926535897936;
constexpr std::size_t kMaxTruncationLevel = 100000;

Integer max_spread(const MoranSystem &system, std::size_t from) {
  // Largest a * N over levels >= from (periodic tail assumed).
  Integer best = 0;
  for (std::size_t k = from; k <= system.prefix().size(); ++k) {
    const auto &lv = system.prefix()[k - 1];
    best = std::max(best, Integer(lv.scale * lv.count));
  }
  for (const auto &lv : std::get<PeriodicTail>(system.tail()).levels)
    best = std::max(best, Integer(lv.scale * lv.count));
  return best;
}

} // namespace

MeasureWindow::MeasureWindow(MoranSystem system, std::size_t first, std::size_t last)
    : system_(std::move(system)), first_(first), last_(last) {
  if (first_ < 1) throw InputError("window must start at level >= 1");
  if (last_ == kInfiniteLevel) {
    if (!system_.has_periodic_tail())
      throw InputError("infinite windows require a periodic tail");
    return;
  }
  if (first_ > last_)
    throw InputError("window " + std::to_string(first_) + ".." + std::to_string(last_) + " is empty");
  if (!system_.is_addressable(last_))
    throw InputError("window end " + std::to_string(last_) + " is beyond the system horizon");
}

std::optional<Integer> stratum_multiplier(const DigitLevel &level, const Integer &product,
                                          const Rational &lambda) {
  if (level.count == 1) return std::nullopt;
  const Rational m = lambda * Rational(Integer(level.scale * level.count)) / Rational(product);
  if (!m.is_integer()) return std::nullopt;
  if (detail::floor_mod(m.num(), level.count) == 0) return std::nullopt;
  return m.num();
}

TransformValue factor_transform(const DigitLevel &level, const Integer &product, const Rational &xi) {
  const Rational t = xi * Rational(level.scale) / Rational(product);
  const auto f = detail::dirichlet_factor<Integer>(t.num(), t.den(), level.count);
  TransformValue out;
  out.value = f.value;
  out.exact_zero = f.exact_zero;
  out.error_bound = f.exact_zero ? 0.0 : kFactorRounding;
  return out;
}

std::size_t truncation_level(const MeasureWindow &window, const Rational &xi, double eps) {
  if (!window.is_infinite()) return window.last();
  if (!(eps > 0.0)) throw InputError("eps must be positive");
  const MoranSystem &sys = window.system();
  auto spread = [](const DigitLevel &l) { return Rational(Integer((l.count - 1) * l.scale)); };
  const Rational total = periodic_series(sys, spread);
  const double magnitude = xi.abs().to_double();
  if (magnitude == 0.0) return window.first() - 1;

  Rational head;
  Integer product = 1;
  for (std::size_t k = 1; k < window.first(); ++k) {
    const DigitLevel lv = sys.level(k);
    product *= lv.base;
    head += spread(lv) / Rational(product);
  }
  for (std::size_t n = window.first() - 1; n < kMaxTruncationLevel; ++n) {
    if (n >= window.first()) {
      const DigitLevel lv = sys.level(n);
      product *= lv.base;
      head += spread(lv) / Rational(product);
    }
    const double residual = (total - head).to_double();
    const double bound = kPiUpper * magnitude * residual * (1.0 + 1e-12);
    if (bound <= eps / 2.0) return n;
  }
  throw ResourceLimit("tail bound did not reach eps within " +
                      std::to_string(kMaxTruncationLevel) + " levels");
}

TransformValue evaluate_transform(const MeasureWindow &window, const Rational &xi, double eps) {
  if (xi.is_zero()) return TransformValue{};
  const MoranSystem &sys = window.system();
  std::size_t last = window.last();
  double tail_error = 0.0;
  if (window.is_infinite()) {
    if (!(eps > 0.0)) throw InputError("eps must be positive");
    if (eps < kFactorRounding)
      throw ResourceLimit("requested precision is below the rounding floor");
    if (zero_stratum(window, xi).has_value()) {
      TransformValue zero;
      zero.value = {0.0, 0.0};
      zero.exact_zero = true;
      return zero;
    }
    last = truncation_level(window, xi, eps);
    tail_error = eps / 2.0;
  }

  TransformValue out;
  Integer product = level_product(sys, window.first() - 1);
  std::size_t factors = 0;
  for (std::size_t k = window.first(); k <= last; ++k) {
    const DigitLevel lv = sys.level(k);
    product *= lv.base;
    const TransformValue f = factor_transform(lv, product, xi);
    if (f.exact_zero) {
      out.value = {0.0, 0.0};
      out.error_bound = 0.0;
      out.exact_zero = true;
      return out;
    }
    out.value *= f.value;
    ++factors;
  }
  out.error_bound = tail_error + static_cast<double>(factors) * kFactorRounding;
  if (window.is_infinite() && out.error_bound > eps)
    throw ResourceLimit("requested precision is below the accumulated rounding floor");
  return out;
}

std::optional<ZeroStratumHit> zero_stratum(const MeasureWindow &window, const Rational &lambda) {
  if (lambda.is_zero()) throw InputError("0 never lies in a zero set");
  const MoranSystem &sys = window.system();
  Integer product = level_product(sys, window.first() - 1);
  if (!window.is_infinite()) {
    for (std::size_t k = window.first(); k <= window.last(); ++k) {
      const DigitLevel lv = sys.level(k);
      product *= lv.base;
      if (auto m = stratum_multiplier(lv, product, lambda)) return ZeroStratumHit{k, *m};
    }
    return std::nullopt;
  }
  // Every stratum point at level k has modulus >= B_k / (a_k N_k); once B_k exceeds
  // |lambda| times the largest a N still to come, no later level can contain lambda.
  const Rational limit = lambda.abs() * Rational(max_spread(sys, window.first()));
  for (std::size_t k = window.first();; ++k) {
    const DigitLevel lv = sys.level(k);
    product *= lv.base;
    if (auto m = stratum_multiplier(lv, product, lambda)) return ZeroStratumHit{k, *m};
    if (Rational(product) > limit) return std::nullopt;
  }
}

Rational stratum_point(const MoranSystem &system, const ZeroStratumHit &hit) {
  const DigitLevel lv = system.level(hit.level);
  return Rational(level_product(system, hit.level)) / Rational(Integer(lv.scale * lv.count)) *
         Rational(hit.multiplier);
}

std::optional<GridKernel> GridKernel::build(const MeasureWindow &window, const Integer &denominator) {
  if (window.is_infinite() || denominator < 1) return std::nullopt;
  GridKernel kernel;
  kernel.denominator_ = denominator;
  const MoranSystem &sys = window.system();
  Integer product = level_product(sys, window.first() - 1);
  const Integer limit = Integer(std::int64_t{1} << 62);
  for (std::size_t k = window.first(); k <= window.last(); ++k) {
    const DigitLevel lv = sys.level(k);
    product *= lv.base;
    if (lv.count > limit) return std::nullopt;
    const Integer lb = denominator * product;
    // t = a x / (L B) reduced by g = gcd(a, L B).
    const Integer g = gcd(lv.scale, lb);
    const Integer alpha = lv.scale / g;
    const Integer modulus = lb / g;
    if (alpha > limit || modulus > limit) return std::nullopt;
    Level level{k, lv.count.get_si(), alpha.get_si(), modulus.get_si(), 0, 0};
    if (lv.count > 1) {
      const Integer q = lb / gcd(lb, Integer(lv.scale * lv.count));
      const Integer r = lb / gcd(lb, lv.scale);
      level.zero_q = q <= limit ? q.get_si() : 0;
      level.zero_r = r <= limit ? r.get_si() : 0;
    }
    kernel.levels_.push_back(level);
  }
  return kernel;
}

std::optional<std::size_t> GridKernel::zero_level(std::int64_t x) const {
  for (const Level &lv : levels_) {
    if (lv.zero_q == 0) continue;
    if (x % lv.zero_q != 0) continue;
    if (lv.zero_r != 0 && x % lv.zero_r == 0) continue;
    return lv.index;
  }
  return std::nullopt;
}

TransformValue GridKernel::transform(std::int64_t x) const {
  TransformValue out;
  for (const Level &lv : levels_) {
    const auto f = detail::dirichlet_factor<detail::int128>(detail::int128(lv.alpha) * x, lv.modulus,
                                                            lv.count);
    if (f.exact_zero) {
      out.value = {0.0, 0.0};
      out.error_bound = 0.0;
      out.exact_zero = true;
      return out;
    }
    out.value *= f.value;
  }
  out.error_bound = static_cast<double>(levels_.size()) * kFactorRounding;
  return out;
}

namespace {

// sin^2(pi r / q) for 0 <= r < q, folded to [0, q/2].
double sin_squared(std::int64_t r, std::int64_t q) {
  const double s = std::sin(std::numbers::pi * (static_cast<double>(std::min(r, q - r)) / static_cast<double>(q)));
  return s * s;
}

} // namespace

double GridKernel::power(std::int64_t x) const {
  double p = 1.0;
  for (const Level &lv : levels_) {
    if (lv.count == 1) continue;
    std::int64_t t = 0, nu = 0;
    if (__builtin_mul_overflow(lv.alpha, x, &t)) {
      p *= detail::dirichlet_power<detail::int128>(detail::int128(lv.alpha) * x, lv.modulus, lv.count);
    } else {
      const std::int64_t u = ((t % lv.modulus) + lv.modulus) % lv.modulus;
      if (u == 0) continue;
      if (__builtin_mul_overflow(lv.count, u, &nu)) {
        p *= detail::dirichlet_power<detail::int128>(t, lv.modulus, lv.count);
      } else {
        // sin^2 has period pi, so only n u mod q matters.
        const std::int64_t v = nu % lv.modulus;
        if (v == 0) return 0.0;
        const double n = static_cast<double>(lv.count);
        p *= sin_squared(v, lv.modulus) / (n * n * sin_squared(u, lv.modulus));
      }
    }
    if (p == 0.0) return 0.0;
  }
  return p;
}

std::vector<double> GridKernel::power_sums(std::int64_t x0, std::int64_t dx, std::size_t count,
                                           const std::vector<std::int64_t> &lambdas, unsigned threads) const {
  constexpr std::size_t kTableBudget = std::size_t{1} << 22;
  struct Prepared {
    std::int64_t modulus;
    double n2;
    std::vector<std::int64_t> a, na, b, nb; // alpha x and count alpha x mod modulus
    std::vector<double> table;              // sin^2(pi r / modulus) for r <= modulus / 2
  };
  auto mulmod = [](std::int64_t u, std::int64_t v, std::int64_t m) {
    return static_cast<std::int64_t>(detail::floor_mod(detail::int128(u) * v, m));
  };
  std::vector<Prepared> prepared;
  std::size_t table_entries = 0;
  const std::size_t evaluations = count * lambdas.size();
  for (const Level &lv : levels_) {
    if (lv.count == 1) continue;
    Prepared p;
    p.modulus = lv.modulus;
    p.n2 = static_cast<double>(lv.count) * static_cast<double>(lv.count);
    const std::int64_t m = lv.modulus;
    const std::int64_t start = mulmod(lv.alpha, x0, m), step = mulmod(lv.alpha, dx, m);
    p.a.resize(count);
    p.na.resize(count);
    std::int64_t cur = start;
    for (std::size_t i = 0; i < count; ++i) {
      p.a[i] = cur;
      p.na[i] = mulmod(lv.count, cur, m);
      cur = static_cast<std::int64_t>(detail::floor_mod(detail::int128(cur) + step, m));
    }
    for (const std::int64_t l : lambdas) {
      p.b.push_back(mulmod(lv.alpha, l, m));
      p.nb.push_back(mulmod(lv.count, p.b.back(), m));
    }
    const std::size_t half = static_cast<std::size_t>(m / 2) + 1;
    if (table_entries + half <= kTableBudget && half <= evaluations) {
      table_entries += half;
      p.table.resize(half);
      for (std::size_t r = 0; r < half; ++r) p.table[r] = sin_squared(static_cast<std::int64_t>(r), m);
    }
    prepared.push_back(std::move(p));
  }

  auto add = [](std::int64_t u, std::int64_t v, std::int64_t m) {
    // u, v in [0, m) with m <= 2^62, so u + v cannot overflow.
    const std::int64_t s = u + v;
    return s >= m ? s - m : s;
  };
  std::vector<double> out(count, 0.0);
  parallel_for(count, threads, [&](std::size_t i) {
    double q = 0.0;
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
      double p = 1.0;
      for (const Prepared &lv : prepared) {
        const std::int64_t u = add(lv.a[i], lv.b[j], lv.modulus);
        if (u == 0) continue;
        const std::int64_t v = add(lv.na[i], lv.nb[j], lv.modulus);
        if (v == 0) {
          p = 0.0;
          break;
        }
        if (lv.table.empty()) {
          p *= sin_squared(v, lv.modulus) / (lv.n2 * sin_squared(u, lv.modulus));
        } else {
          const auto fold = [&](std::int64_t r) { return static_cast<std::size_t>(std::min(r, lv.modulus - r)); };
          p *= lv.table[fold(v)] / (lv.n2 * lv.table[fold(u)]);
        }
        if (p == 0.0) break;
      }
      q += p;
    }
    out[i] = q;
  });
  return out;
}

std::vector<GridKernel::ZeroModulus> GridKernel::zero_moduli() const {
  std::vector<ZeroModulus> out;
  for (const Level &lv : levels_)
    if (lv.zero_q != 0) out.push_back({lv.index, lv.zero_q, lv.zero_r});
  return out;
}

} // namespace moran
