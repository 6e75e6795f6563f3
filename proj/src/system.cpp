#include "moran/system.hpp"

#include <algorithm>

#include "moran/errors.hpp"

namespace moran {

namespace {

void validate_level(const DigitLevel &level, const std::string &where) {
  if (level.base < 2) throw InputError(where + ": base must be >= 2, got " + level.base.get_str());
  if (level.count < 1) throw InputError(where + ": count must be >= 1, got " + level.count.get_str());
  if (level.scale < 1) throw InputError(where + ": scale must be >= 1, got " + level.scale.get_str());
}

std::vector<DigitLevel> unit_levels(const std::vector<long> &bases, const std::vector<long> &counts) {
  if (bases.size() != counts.size()) throw InputError("base and count lists differ in length");
  std::vector<DigitLevel> out;
  out.reserve(bases.size());
  for (std::size_t i = 0; i < bases.size(); ++i)
    out.push_back(DigitLevel{Integer(bases[i]), Integer(counts[i]), Integer(1)});
  return out;
}

Rational pow(const Rational &x, std::size_t e) {
  Integer n, d;
  mpz_pow_ui(n.get_mpz_t(), x.num().get_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), x.den().get_mpz_t(), e);
  return Rational(n, d);
}

Integer formula_count(const FormulaTail &f, std::size_t n) {
  const Rational v = f.c * pow(f.rho, n) + Rational(Integer(1), Integer(2));
  const Integer rounded = v.floor();
  return rounded < 2 ? Integer(2) : rounded;
}

// Sum over k in [1, n] of term(level_k) / B_k.
Rational partial_series(const MoranSystem &system, std::size_t n,
                        const std::function<Rational(const DigitLevel &)> &term) {
  Rational sum;
  Integer product = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    const DigitLevel lv = system.level(k);
    product *= lv.base;
    sum += term(lv) / Rational(product);
  }
  return sum;
}

} // namespace

MoranSystem::MoranSystem(std::vector<DigitLevel> prefix, Tail tail)
    : prefix_(std::move(prefix)), tail_(std::move(tail)) {
  for (std::size_t i = 0; i < prefix_.size(); ++i)
    validate_level(prefix_[i], "prefix level " + std::to_string(i + 1));
  bool nontrivial = std::any_of(prefix_.begin(), prefix_.end(),
                                [](const DigitLevel &l) { return l.count >= 2; });
  if (std::holds_alternative<NoTail>(tail_)) {
    if (prefix_.empty()) throw InputError("empty prefix with no tail");
  } else if (const auto *p = std::get_if<PeriodicTail>(&tail_)) {
    if (p->levels.empty()) throw InputError("periodic tail must have period >= 1");
    for (std::size_t i = 0; i < p->levels.size(); ++i)
      validate_level(p->levels[i], "tail level " + std::to_string(i + 1));
    nontrivial = nontrivial || std::any_of(p->levels.begin(), p->levels.end(),
                                           [](const DigitLevel &l) { return l.count >= 2; });
  } else {
    const auto &f = std::get<FormulaTail>(tail_);
    if (f.base < 2) throw InputError("formula tail: base must be >= 2");
    if (f.c.sign() <= 0) throw InputError("formula tail: c must be > 0");
    if (f.rho < Rational(1)) throw InputError("formula tail: rho must be >= 1");
    nontrivial = true;
  }
  if (!nontrivial) throw InputError("system needs at least one level with count >= 2");
}

MoranSystem MoranSystem::finite(const std::vector<long> &bases, const std::vector<long> &counts) {
  return MoranSystem(unit_levels(bases, counts), NoTail{});
}

MoranSystem MoranSystem::periodic(const std::vector<long> &prefix_bases,
                                  const std::vector<long> &prefix_counts,
                                  const std::vector<long> &tail_bases,
                                  const std::vector<long> &tail_counts) {
  return MoranSystem(unit_levels(prefix_bases, prefix_counts),
                     PeriodicTail{unit_levels(tail_bases, tail_counts)});
}

std::size_t MoranSystem::horizon() const {
  if (is_finite()) return prefix_.size();
  return kInfiniteLevel - 1;
}

DigitLevel MoranSystem::level(std::size_t n) const {
  if (!is_addressable(n))
    throw InputError("level " + std::to_string(n) + " is beyond the system horizon " +
                     std::to_string(horizon()));
  if (n <= prefix_.size()) return prefix_[n - 1];
  if (const auto *p = std::get_if<PeriodicTail>(&tail_))
    return p->levels[(n - prefix_.size() - 1) % p->levels.size()];
  const auto &f = std::get<FormulaTail>(tail_);
  return DigitLevel{f.base, formula_count(f, n), Integer(1)};
}

bool MoranSystem::unit_scales() const {
  auto unit = [](const DigitLevel &l) { return l.scale == 1; };
  if (!std::all_of(prefix_.begin(), prefix_.end(), unit)) return false;
  if (const auto *p = std::get_if<PeriodicTail>(&tail_))
    return std::all_of(p->levels.begin(), p->levels.end(), unit);
  return true;
}

Integer level_product(const MoranSystem &system, std::size_t n) {
  Integer product = 1;
  for (std::size_t k = 1; k <= n; ++k) product *= system.level(k).base;
  return product;
}

std::vector<Integer> level_products(const MoranSystem &system, std::size_t n) {
  std::vector<Integer> out;
  out.reserve(n);
  Integer product = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    product *= system.level(k).base;
    out.push_back(product);
  }
  return out;
}

Rational periodic_series(const MoranSystem &system,
                         const std::function<Rational(const DigitLevel &)> &term) {
  const auto *tail = std::get_if<PeriodicTail>(&system.tail());
  if (tail == nullptr) throw InputError("closed-form series needs a periodic tail");
  const std::size_t p = system.prefix().size();
  const Rational head = partial_series(system, p, term);
  const Integer prefix_product = level_product(system, p);
  // One period: sum_i term_i / T_i with T_i the running product inside the period.
  Rational block;
  Integer running = 1;
  for (const auto &lv : tail->levels) {
    running *= lv.base;
    block += term(lv) / Rational(running);
  }
  // Tail = block / B_p * (1 + 1/R + 1/R^2 + ...) with R the full period product.
  const Rational ratio(running, running - 1);
  return head + block * ratio / Rational(prefix_product);
}

ConvergenceReport check_convergence(const MoranSystem &system) {
  auto count_term = [](const DigitLevel &l) { return Rational(l.count); };
  ConvergenceReport report{};
  if (system.is_finite()) {
    report.verdict = Convergence::Convergent;
    report.sum = partial_series(system, system.prefix().size(), count_term);
    report.sum_exact = true;
    report.certificate = ConvergenceCertificate::FinitePrefix;
    report.note = "finite prefix only; the infinite model is unspecified";
    return report;
  }
  if (system.has_periodic_tail()) {
    report.verdict = Convergence::Convergent;
    report.sum = periodic_series(system, count_term);
    report.sum_exact = true;
    report.certificate = ConvergenceCertificate::GeometricRatio;
    return report;
  }

  const auto &f = std::get<FormulaTail>(system.tail());
  const std::size_t p = system.prefix().size();
  const Rational head = partial_series(system, p, count_term);
  const Rational prefix_product(level_product(system, p));
  const Rational b(f.base);

  if (f.rho >= b) {
    report.verdict = Convergence::Divergent;
    report.certificate = ConvergenceCertificate::NonvanishingTerms;
    report.note = "rho >= b: terms N_n / B_n do not tend to zero";
    return report;
  }
  report.verdict = Convergence::Convergent;
  if (f.rho == Rational(1)) {
    // Constant count M: the tail is M / (B_p (b - 1)).
    const Integer m = formula_count(f, p + 1);
    report.sum = head + Rational(m) / (prefix_product * (b - Rational(1)));
    report.sum_exact = true;
    bool corollary = m <= f.base;
    for (std::size_t k = 2; k <= p; ++k)
      corollary = corollary && system.prefix()[k - 1].count <= system.prefix()[k - 1].base;
    report.certificate = corollary ? ConvergenceCertificate::BoundedByCorollary
                                   : ConvergenceCertificate::GeometricRatio;
    return report;
  }
  // N_n <= c rho^n + 2, so the tail is at most
  // (c rho^p * rho / (b - rho) + 2 / (b - 1)) / B_p.
  const Rational rho_p = pow(f.rho, p);
  const Rational bound =
      (f.c * rho_p * f.rho / (b - f.rho) + Rational(2) / (b - Rational(1))) / prefix_product;
  report.sum = head + bound;
  report.sum_exact = false;
  report.certificate = ConvergenceCertificate::RatioTest;
  report.note = "sum is an upper bound";
  return report;
}

SupportInfo support_info(const MoranSystem &system, std::size_t n) {
  auto spread = [](const DigitLevel &l) { return Rational(Integer((l.count - 1) * l.scale)); };
  SupportInfo info;
  if (n == kInfiniteLevel) {
    if (!system.has_periodic_tail())
      throw InputError("infinite support requires a periodic tail");
    info.diameter = periodic_series(system, spread);
    info.resolution = Rational(0);
    return info;
  }
  if (!system.is_addressable(n)) throw InputError("level " + std::to_string(n) + " not addressable");
  info.diameter = partial_series(system, n, spread);
  info.resolution = Rational(Integer(1), level_product(system, n));
  return info;
}

std::vector<std::int64_t> scaled_atoms(const MoranSystem &system, std::size_t first,
                                       std::size_t last, std::size_t max_atoms) {
  if (first < 1 || first > last || !system.is_addressable(last))
    throw InputError("invalid window " + std::to_string(first) + ".." + std::to_string(last));
  std::vector<std::int64_t> atoms{0};
  for (std::size_t k = first; k <= last; ++k) {
    const DigitLevel lv = system.level(k);
    const std::int64_t b = to_int64(lv.base);
    const std::int64_t a = to_int64(lv.scale);
    const std::int64_t n = to_int64(lv.count);
    if (static_cast<double>(atoms.size()) * static_cast<double>(n) > static_cast<double>(max_atoms))
      throw ResourceLimit("window has more than " + std::to_string(max_atoms) + " atoms");
    std::vector<std::int64_t> next;
    next.reserve(atoms.size() * static_cast<std::size_t>(n));
    for (const std::int64_t x : atoms) {
      std::int64_t shifted = 0;
      if (__builtin_mul_overflow(x, b, &shifted))
        throw InputError("atom coordinates overflow 64 bits");
      for (std::int64_t d = 0; d < n; ++d) {
        std::int64_t digit = 0, value = 0;
        if (__builtin_mul_overflow(a, d, &digit) || __builtin_add_overflow(shifted, digit, &value))
          throw InputError("atom coordinates overflow 64 bits");
        next.push_back(value);
      }
    }
    atoms = std::move(next);
  }
  std::sort(atoms.begin(), atoms.end());
  return atoms;
}

std::string to_string(Convergence v) {
  switch (v) {
  case Convergence::Convergent: return "Convergent";
  case Convergence::Divergent: return "Divergent";
  case Convergence::Unknown: return "Unknown";
  }
  return "?";
}

std::string to_string(ConvergenceCertificate c) {
  switch (c) {
  case ConvergenceCertificate::GeometricRatio: return "geometric-ratio";
  case ConvergenceCertificate::RatioTest: return "ratio-test";
  case ConvergenceCertificate::NonvanishingTerms: return "nonvanishing-terms";
  case ConvergenceCertificate::BoundedByCorollary: return "bounded-by-corollary";
  case ConvergenceCertificate::FinitePrefix: return "finite-prefix";
  }
  return "?";
}

} // namespace moran
