#include "moran/tiling.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "moran/errors.hpp"
#include "moran/parallel.hpp"
#include "moran/spectra.hpp"

namespace moran {

namespace {

constexpr std::int64_t kMaxCountingLength = std::int64_t{1} << 28;

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw InputError("digit coordinates overflow 64 bits");
  return out;
}

using Words = std::vector<std::uint64_t>;

bool disjoint(const Words &a, const Words &b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] & b[k]) return false;
  return true;
}

// Lexicographically least B with D + B = Z_m, searched by ascending elements.
// Gives up with nullopt once *stop is set.
class PeriodSearch {
public:
  PeriodSearch(const std::vector<std::int64_t> &digits, std::int64_t m, const std::atomic<bool> *stop)
      : digits_(digits), m_(m), stop_(stop) {
    const std::size_t words = static_cast<std::size_t>((m + 63) / 64);
    full_ = Words(words, 0);
    for (std::int64_t r = 0; r < m; ++r) set(full_, r);
    masks_.assign(static_cast<std::size_t>(m), Words(words, 0));
    for (std::int64_t t = 0; t < m; ++t)
      for (auto d : digits) set(masks_[static_cast<std::size_t>(t)], (d + t) % m);
  }

  std::optional<std::vector<std::int64_t>> run() {
    Words covered(full_.size(), 0);
    chosen_.clear();
    try {
      if (extend(covered, -1)) return chosen_;
    } catch (const Stopped &) {
    }
    return std::nullopt;
  }

private:
  struct Stopped {};

  static void set(Words &w, std::int64_t i) { w[static_cast<std::size_t>(i / 64)] |= std::uint64_t{1} << (i % 64); }
  static bool test(const Words &w, std::int64_t i) { return (w[static_cast<std::size_t>(i / 64)] >> (i % 64)) & 1; }

  bool extend(Words &covered, std::int64_t last) {
    if ((++nodes_ & 1023) == 0 && stop_ && stop_->load(std::memory_order_relaxed)) throw Stopped{};
    std::int64_t u = 0;
    while (u < m_ && test(covered, u)) ++u;
    if (u == m_) return true;
    // Some later element must cover u, so the next element cannot exceed the
    // largest translate that still does.
    std::int64_t bound = -1;
    for (auto d : digits_) {
      const std::int64_t t = ((u - d) % m_ + m_) % m_;
      if (t > last && t > bound && disjoint(masks_[static_cast<std::size_t>(t)], covered)) bound = t;
    }
    for (std::int64_t t = last + 1; t <= bound; ++t) {
      const Words &mask = masks_[static_cast<std::size_t>(t)];
      if (!disjoint(mask, covered)) continue;
      for (std::size_t k = 0; k < covered.size(); ++k) covered[k] |= mask[k];
      chosen_.push_back(t);
      if (extend(covered, t)) return true;
      chosen_.pop_back();
      for (std::size_t k = 0; k < covered.size(); ++k) covered[k] &= ~mask[k];
    }
    return false;
  }

  const std::vector<std::int64_t> &digits_;
  std::int64_t m_;
  Words full_;
  std::vector<Words> masks_;
  std::vector<std::int64_t> chosen_;
  const std::atomic<bool> *stop_;
  std::uint64_t nodes_ = 0;
};

std::optional<std::vector<std::int64_t>> tile_with_period(const std::vector<std::int64_t> &digits,
                                                          std::int64_t m,
                                                          const std::atomic<bool> *stop = nullptr) {
  std::vector<std::int64_t> residues;
  for (auto d : digits) residues.push_back(d % m);
  std::sort(residues.begin(), residues.end());
  if (std::adjacent_find(residues.begin(), residues.end()) != residues.end()) return std::nullopt;
  return PeriodSearch(digits, m, stop).run();
}

std::vector<std::int64_t> prime_factors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) out.push_back(n);
  return out;
}

std::int64_t prime_of(std::int64_t prime_power) { return prime_factors(prime_power).front(); }

constexpr std::int64_t kMaxT2Index = std::int64_t{1} << 14;

// Product s t of prime powers of different primes with Phi_{st} not dividing the mask.
std::optional<std::int64_t> t2_violation(const std::vector<std::int64_t> &digits,
                                         const std::vector<std::int64_t> &prime_powers) {
  for (std::size_t i = 0; i < prime_powers.size(); ++i)
    for (std::size_t j = i + 1; j < prime_powers.size(); ++j) {
      const std::int64_t s = prime_powers[i], t = prime_powers[j];
      if (prime_of(s) == prime_of(t) || s * t > kMaxT2Index) continue;
      if (!cyclotomic_divides_mask(digits, s * t)) return s * t;
    }
  return std::nullopt;
}

// Exhaustive search for translates that, together with D itself, cover every
// cell of [-w, max D + w] exactly once. Translates may stick out of the window.
// Failure shows D cannot be part of any tiling of Z.
class LocalPacking {
public:
  LocalPacking(const std::vector<std::int64_t> &digits, std::int64_t w, std::size_t budget)
      : digits_(digits), offset_(w), budget_(budget) {
    covered_.assign(static_cast<std::size_t>(digits.back() + 2 * w + 1), 0);
    place(0, 1);
  }

  /// True: packing exists; false: none; nullopt: budget exhausted.
  std::optional<bool> run() {
    try {
      return extend();
    } catch (const Exhausted &) {
      return std::nullopt;
    }
  }

private:
  struct Exhausted {};

  std::int64_t cells() const { return static_cast<std::int64_t>(covered_.size()); }

  bool fits(std::int64_t t) const {
    for (auto d : digits_) {
      const std::int64_t c = d + t + offset_;
      if (c >= 0 && c < cells() && covered_[static_cast<std::size_t>(c)]) return false;
    }
    return true;
  }

  void place(std::int64_t t, char value) {
    for (auto d : digits_) {
      const std::int64_t c = d + t + offset_;
      if (c >= 0 && c < cells()) covered_[static_cast<std::size_t>(c)] = value;
    }
  }

  bool extend() {
    if (++nodes_ > budget_) throw Exhausted{};
    // Branch on the uncovered cell with the fewest translates able to cover it.
    std::vector<std::int64_t> best;
    bool any = false;
    for (std::int64_t c = 0; c < cells(); ++c) {
      if (covered_[static_cast<std::size_t>(c)]) continue;
      std::vector<std::int64_t> options;
      for (auto it = digits_.rbegin(); it != digits_.rend(); ++it) {
        const std::int64_t t = c - offset_ - *it;
        if (fits(t)) options.push_back(t);
      }
      if (!any || options.size() < best.size()) best = std::move(options);
      any = true;
      if (best.empty()) return false;
    }
    if (!any) return true;
    for (auto t : best) {
      place(t, 1);
      if (extend()) return true;
      place(t, 0);
    }
    return false;
  }

  const std::vector<std::int64_t> &digits_;
  std::int64_t offset_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  std::vector<char> covered_;
};

constexpr std::size_t kLocalPackingBudget = 20000;

std::vector<std::int64_t> parse_integers(std::string_view text) {
  std::vector<std::int64_t> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream tokens(line);
    std::string token;
    while (tokens >> token) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(token, &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used != token.size())
        throw InputError("line " + std::to_string(number) + ": '" + token + "' is not an integer");
      out.push_back(v);
    }
  }
  return out;
}

} // namespace

IteratedDigitSet iterated_digits(const std::vector<DigitLevel> &levels) {
  if (levels.empty()) throw InputError("iterated digit set needs at least one level");
  IteratedDigitSet out;
  out.level = levels.size();
  std::vector<std::int64_t> atoms{0};
  std::size_t total = 1;
  for (const auto &lv : levels) {
    const std::int64_t b = to_int64(lv.base), a = to_int64(lv.scale), n = to_int64(lv.count);
    total *= static_cast<std::size_t>(n);
    if (total > (std::size_t{1} << 26)) throw ResourceLimit("iterated digit set exceeds 2^26 elements");
    std::vector<std::int64_t> next;
    next.reserve(total);
    for (auto x : atoms)
      for (std::int64_t d = 0; d < n; ++d) next.push_back(checked_mul(x, b) + checked_mul(a, d));
    atoms = std::move(next);
  }
  std::sort(atoms.begin(), atoms.end());
  out.direct_sum = std::adjacent_find(atoms.begin(), atoms.end()) == atoms.end();
  out.elements = std::move(atoms);
  out.span = checked_mul(to_int64(levels[0].scale), to_int64(levels[0].count));
  for (std::size_t k = 1; k < levels.size(); ++k) out.span = checked_mul(out.span, to_int64(levels[k].base));
  return out;
}

IteratedDigitSet iterated_digits(const MoranSystem &system, std::size_t n) {
  if (n == kInfiniteLevel || !system.is_addressable(n))
    throw InputError("level " + std::to_string(n) + " not addressable");
  std::vector<DigitLevel> levels;
  for (std::size_t k = 1; k <= n; ++k) levels.push_back(system.level(k));
  return iterated_digits(levels);
}

bool convolve_uniform_check(const IteratedDigitSet &digits, const IteratedDigitSet &complement,
                            std::int64_t length) {
  if (length < 1) return false;
  if (length > kMaxCountingLength) throw ResourceLimit("counting array exceeds 2^28 entries");
  if (static_cast<std::int64_t>(digits.elements.size() * complement.elements.size()) != length)
    return false;
  std::vector<unsigned char> count(static_cast<std::size_t>(length), 0);
  for (auto d : digits.elements)
    for (auto c : complement.elements) {
      const std::int64_t s = d + c;
      if (s < 0 || s >= length) return false;
      if (count[static_cast<std::size_t>(s)]++) return false;
    }
  return true;
}

ComplementResult canonical_complement(const MoranSystem &system, std::size_t n) {
  if (n == kInfiniteLevel || !system.is_addressable(n))
    throw InputError("level " + std::to_string(n) + " not addressable");
  for (std::size_t k = 1; k <= n; ++k)
    if (system.level(k).scale != 1) throw InputError("complement construction needs unit scales");
  const SpectralVerdict verdict = truncation_spectral_verdict(system, n);
  if (verdict.kind == SpectralVerdictKind::NotSpectral) throw NotSpectralError(verdict.level);

  ComplementResult out;
  const DigitLevel first = system.level(1);
  out.levels.push_back(DigitLevel{first.base, 1, 1});
  out.length = to_int64(first.count);
  bool nontrivial = false;
  for (std::size_t k = 2; k <= n; ++k) {
    const DigitLevel lv = system.level(k);
    const Integer r = lv.base / lv.count;
    nontrivial = nontrivial || r >= 2;
    out.levels.push_back(DigitLevel{lv.base, r, lv.count});
    out.length = checked_mul(out.length, to_int64(lv.base));
  }
  if (nontrivial) out.system = MoranSystem(out.levels, NoTail{});
  out.digits = iterated_digits(system, n);
  out.complement = iterated_digits(out.levels);
  out.certified = convolve_uniform_check(out.digits, out.complement, out.length);
  if (!out.certified) throw std::logic_error("canonical complement failed its counting certificate");
  return out;
}

bool is_direct_tiling(const std::vector<std::int64_t> &a, const std::vector<std::int64_t> &b,
                      std::int64_t m) {
  if (m < 1 || static_cast<std::int64_t>(a.size() * b.size()) != m) return false;
  std::vector<unsigned char> hit(static_cast<std::size_t>(m), 0);
  for (auto x : a)
    for (auto y : b) {
      const std::int64_t s = ((x + y) % m + m) % m;
      if (hit[static_cast<std::size_t>(s)]++) return false;
    }
  return true;
}

TileVerdict is_integer_tile(std::vector<std::int64_t> digits, std::int64_t max_period, unsigned threads) {
  if (digits.empty()) throw InputError("digit set is empty");
  std::sort(digits.begin(), digits.end());
  if (digits.front() < 0) throw InputError("digits must be nonnegative");
  if (digits.front() != 0) throw InputError("digit set must contain 0");
  if (std::adjacent_find(digits.begin(), digits.end()) != digits.end())
    throw InputError("digit set has repeated elements");

  const auto divisors = cyclotomic_prime_power_divisors(digits);
  std::int64_t product = 1;
  for (auto s : divisors) {
    const Polynomial phi = cyclotomic_polynomial(s);
    product = checked_mul(product, std::accumulate(phi.begin(), phi.end(), std::int64_t{0}));
  }
  const std::int64_t size = static_cast<std::int64_t>(digits.size());
  if (product != size) return NotTile{size, product, divisors};
  if (prime_factors(size).size() <= 2) {
    if (auto missing = t2_violation(digits, divisors)) {
      NotTile out{size, product, divisors};
      out.reason = NotTileReason::T2;
      out.missing = *missing;
      return out;
    }
  }
  const std::int64_t window = digits.back() + 1;
  if (LocalPacking(digits, window, kLocalPackingBudget).run() == false) {
    NotTile out{size, product, divisors};
    out.reason = NotTileReason::LocalPacking;
    out.window = window;
    return out;
  }

  // A period m of a tiling is divisible by every s with Phi_s | D(x): at a
  // primitive s-th root with s not dividing m, 1/(1 - zeta) would be an
  // algebraic integer. Hence m runs over multiples of the lcm of the divisors.
  std::int64_t step = size;
  for (auto s : divisors) {
    step = std::lcm(step, s);
    if (step > max_period) return TileUnknown{max_period};
  }
  std::vector<std::int64_t> periods;
  for (std::int64_t m = step; m <= max_period; m += step) periods.push_back(m);
  const std::size_t workers = resolve_threads(threads);
  for (std::size_t begin = 0; begin < periods.size(); begin += workers) {
    const std::size_t end = std::min(periods.size(), begin + workers);
    std::vector<std::optional<std::vector<std::int64_t>>> found(end - begin);
    // stop[i] is raised once a smaller period of the batch has a complement.
    std::vector<std::atomic<bool>> stop(end - begin);
    parallel_for(end - begin, static_cast<unsigned>(workers), [&](std::size_t i) {
      if (stop[i].load()) return;
      found[i] = tile_with_period(digits, periods[begin + i], &stop[i]);
      if (found[i])
        for (std::size_t j = i + 1; j < stop.size(); ++j) stop[j].store(true);
    });
    for (std::size_t i = 0; i < found.size(); ++i) {
      if (!found[i]) continue;
      const std::int64_t m = periods[begin + i];
      if (!is_direct_tiling(digits, *found[i], m))
        throw std::logic_error("tiling search produced an invalid complement");
      return Tile{m, *found[i]};
    }
  }
  return TileUnknown{max_period};
}

std::string format_integer_list(const std::vector<std::int64_t> &values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

std::string format_tile_verdict(const TileVerdict &verdict) {
  if (const auto *t = std::get_if<Tile>(&verdict))
    return "TILE m=" + std::to_string(t->period) + " complement=" + format_integer_list(t->complement);
  if (const auto *n = std::get_if<NotTile>(&verdict)) {
    const std::string head = " A(1)=" + std::to_string(n->mask_at_one) + " prod=" + std::to_string(n->product);
    switch (n->reason) {
    case NotTileReason::T1: return "NOTTILE T1" + head;
    case NotTileReason::T2: return "NOTTILE T2" + head + " missing=" + std::to_string(n->missing);
    case NotTileReason::LocalPacking: return "NOTTILE LOCAL" + head + " window=" + std::to_string(n->window);
    }
  }
  return "UNKNOWN m_max=" + std::to_string(std::get<TileUnknown>(verdict).max_period);
}

RescaledTiling tijdeman_rescale(const std::vector<std::int64_t> &a, const std::vector<std::int64_t> &b,
                                std::int64_t m, std::int64_t r) {
  if (m < 1) throw InputError("period must be positive");
  if (std::find(a.begin(), a.end(), 0) == a.end() || std::find(b.begin(), b.end(), 0) == b.end())
    throw InputError("both sets must contain 0");
  if (!is_direct_tiling(a, b, m))
    throw InputError("A + B is not a direct tiling of Z_" + std::to_string(m));
  if (std::gcd(r, static_cast<std::int64_t>(a.size())) != 1)
    throw InputError("r = " + std::to_string(r) + " is not coprime to #A = " + std::to_string(a.size()));

  RescaledTiling out;
  out.period = m;
  for (auto x : a) out.scaled.push_back(((checked_mul(r, x) % m) + m) % m);
  std::sort(out.scaled.begin(), out.scaled.end());
  out.complement = b;
  std::sort(out.complement.begin(), out.complement.end());
  if (!is_direct_tiling(out.scaled, out.complement, m))
    throw std::logic_error("rescaled set failed to tile; coprimality should guarantee it");
  return out;
}

std::vector<std::int64_t> parse_digit_set(std::string_view text) {
  auto out = parse_integers(text);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::int64_t> load_digit_set(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_digit_set(buf.str());
}

} // namespace moran
