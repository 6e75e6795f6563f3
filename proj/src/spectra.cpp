#include "moran/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "moran/errors.hpp"
#include "moran/parallel.hpp"
#include "pair_zero.hpp"

namespace moran {

namespace {

constexpr std::size_t kMaxConstructedSize = std::size_t{1} << 22;

bool divides(const Integer &d, const Integer &n) { return n % d == 0; }

} // namespace

CandidateSet::CandidateSet(std::vector<Rational> elements) : elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
}

bool CandidateSet::contains(const Rational &x) const {
  return std::binary_search(elements_.begin(), elements_.end(), x);
}

CandidateSet CandidateSet::scaled(const Rational &c) const {
  if (c.is_zero()) throw InputError("scaling factor must be nonzero");
  std::vector<Rational> out;
  out.reserve(elements_.size());
  for (const auto &x : elements_) out.push_back(x * c);
  return CandidateSet(std::move(out));
}

BiZeroCheck is_bizero(const MeasureWindow &window, const CandidateSet &set) {
  const auto &pts = set.elements();
  const detail::PairZeroIndex index(window, pts);
  const std::size_t n = pts.size();
  // first_bad[i] = first j > i whose difference misses the zero set, or n.
  std::vector<std::size_t> first_bad(n, n);
  const unsigned threads = (index.fast() && n > 512) ? 0 : 1;
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!index.level(j, i)) {
        first_bad[i] = j;
        return;
      }
    }
  });
  BiZeroCheck out;
  for (std::size_t i = 0; i < n; ++i) {
    if (first_bad[i] < n) {
      out.bizero = false;
      out.violation = RationalPair{pts[i], pts[first_bad[i]]};
      break;
    }
  }
  return out;
}

SpectrumCertificate is_spectrum(const MeasureWindow &window, const CandidateSet &set) {
  if (window.is_infinite())
    throw InputError("spectrum decisions need a finite window; use q_grid for evidence");
  SpectrumCertificate cert;
  cert.first = window.first();
  cert.last = window.last();
  cert.set = set;
  const auto atoms = scaled_atoms(window.system(), window.first(), window.last());
  std::vector<std::int64_t> distinct = atoms;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  cert.atom_count = distinct.size();
  cert.atoms_collide = distinct.size() != atoms.size();

  const BiZeroCheck bz = is_bizero(window, set);
  if (!bz.bizero) {
    cert.status = SpectrumStatus::OrthogonalityFail;
    cert.violation = bz.violation;
  } else if (set.size() != cert.atom_count) {
    cert.status = SpectrumStatus::CardinalityFail;
  } else {
    cert.status = SpectrumStatus::Spectrum;
  }
  return cert;
}

SpectralVerdict truncation_spectral_verdict(const MoranSystem &system, std::size_t n,
                                            std::size_t formula_horizon) {
  auto check_range = [&](std::size_t from, std::size_t to) -> std::optional<std::size_t> {
    for (std::size_t j = std::max<std::size_t>(from, 2); j <= to; ++j) {
      const DigitLevel lv = system.level(j);
      if (!divides(lv.count, lv.base)) return j;
    }
    return std::nullopt;
  };

  if (n != kInfiniteLevel) {
    if (!system.is_addressable(n)) throw InputError("level " + std::to_string(n) + " not addressable");
    if (auto j = check_range(2, n)) return {SpectralVerdictKind::NotSpectral, *j};
    return {SpectralVerdictKind::Spectral, 0};
  }
  const std::size_t p = system.prefix().size();
  if (system.is_finite()) throw InputError("infinite verdict needs a periodic or formula tail");
  if (const auto *tail = std::get_if<PeriodicTail>(&system.tail())) {
    // Levels 2..p+P+1 cover every tail residue class at some index >= 2.
    if (auto j = check_range(2, p + tail->levels.size() + 1))
      return {SpectralVerdictKind::NotSpectral, *j};
    return {SpectralVerdictKind::Spectral, 0};
  }
  if (auto j = check_range(2, p)) return {SpectralVerdictKind::NotSpectral, *j};
  const auto &f = std::get<FormulaTail>(system.tail());
  const std::size_t start = std::max<std::size_t>(p + 1, 2);
  if (f.rho == Rational(1)) {
    // Constant count from level p+1 on: one check decides every later level.
    if (auto j = check_range(start, start)) return {SpectralVerdictKind::NotSpectral, *j};
    return {SpectralVerdictKind::Spectral, 0};
  }
  const std::size_t stop = start + formula_horizon - 1;
  if (auto j = check_range(start, stop)) return {SpectralVerdictKind::NotSpectral, *j};
  return {SpectralVerdictKind::UnknownBeyondHorizon, stop};
}

CandidateSet canonical_spectrum(const MoranSystem &system, std::size_t n) {
  const SpectralVerdict v = truncation_spectral_verdict(system, n);
  if (v.kind == SpectralVerdictKind::NotSpectral) throw NotSpectralError(v.level);

  std::vector<Rational> points{Rational(0)};
  Integer product = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    const DigitLevel lv = system.level(k);
    product *= lv.base;
    if (lv.count == 1) continue;
    const Rational step = Rational(product) / Rational(Integer(lv.scale * lv.count));
    const long count = to_int64(lv.count);
    if (points.size() * static_cast<std::size_t>(count) > kMaxConstructedSize)
      throw ResourceLimit("canonical spectrum exceeds " + std::to_string(kMaxConstructedSize) +
                          " elements");
    std::vector<Rational> next;
    next.reserve(points.size() * static_cast<std::size_t>(count));
    for (const auto &x : points)
      for (long d = 0; d < count; ++d) next.push_back(x + step * Rational(d));
    points = std::move(next);
  }
  CandidateSet set(std::move(points));
  const SpectrumCertificate cert = is_spectrum(MeasureWindow::head(system, n), set);
  if (!cert.is_spectrum())
    throw InputError("canonical construction does not yield a spectrum for this system (" +
                     to_string(cert.status) + ")");
  return set;
}

CandidateSet maximal_bizero_subset(const MeasureWindow &head, const CandidateSet &set) {
  if (!set.contains(Rational(0))) throw InputError("maximal bi-zero subset needs 0 in the set");
  const auto &pts = set.elements();
  const detail::PairZeroIndex index(head, pts);
  const std::size_t zero = static_cast<std::size_t>(
      std::lower_bound(pts.begin(), pts.end(), Rational(0)) - pts.begin());
  std::vector<std::size_t> chosen{zero};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i == zero) continue;
    const bool fits = std::all_of(chosen.begin(), chosen.end(),
                                  [&](std::size_t a) { return index.level(i, a).has_value(); });
    if (fits) chosen.push_back(i);
  }
  std::vector<Rational> out;
  for (std::size_t i : chosen) out.push_back(pts[i]);
  return CandidateSet(std::move(out));
}

bool single_factor_spectrum_check(long count, const CandidateSet &set) {
  if (count < 1) throw InputError("count must be >= 1");
  if (!set.contains(Rational(0))) throw InputError("single-factor check needs 0 in the set");
  if (set.size() != static_cast<std::size_t>(count)) return false;
  std::set<Rational> residues;
  for (const auto &c : set) residues.insert(c.frac());
  if (residues.size() != static_cast<std::size_t>(count)) return false;
  for (long j = 0; j < count; ++j)
    if (!residues.count(Rational(Integer(j), Integer(count)))) return false;
  return true;
}

QValue q_function(const MeasureWindow &window, const CandidateSet &set, const Rational &xi,
                  double eps) {
  QValue q;
  for (const auto &lambda : set) {
    const TransformValue v = evaluate_transform(window, xi + lambda, eps);
    const double m = std::abs(v.value);
    q.value += m * m;
    q.error += 2.0 * std::min(1.0, m + v.error_bound) * v.error_bound + v.error_bound * v.error_bound;
  }
  q.error += static_cast<double>(set.size()) * 0x1p-52;
  return q;
}

std::vector<QSample> q_grid(const MeasureWindow &window, const CandidateSet &set,
                            const Rational &from, const Rational &to, const Rational &step,
                            double eps, unsigned threads) {
  if (step.sign() <= 0) throw InputError("grid step must be positive");
  std::vector<QSample> out;
  if (to < from) return out;
  const Integer steps = ((to - from) / step).floor();
  if (steps > 100'000'000) throw ResourceLimit("grid has more than 1e8 samples");
  const std::size_t count = static_cast<std::size_t>(steps.get_si()) + 1;
  out.resize(count);
  for (std::size_t i = 0; i < count; ++i) out[i].xi = from + step * Rational(static_cast<long>(i));

  // Lattice path: xi and lambda all live on (1/L) Z.
  std::optional<GridKernel> kernel;
  std::vector<std::int64_t> lambdas;
  std::int64_t x0 = 0, dx = 0;
  if (!window.is_infinite()) {
    Integer l = lcm(from.den(), step.den());
    for (const auto &x : set) l = lcm(l, x.den());
    const Integer limit = Integer(GridKernel::kMaxNumerator / 4);
    auto scale = [&](const Rational &x) { return Integer(x.num() * (l / x.den())); };
    bool fits = abs(scale(from)) <= limit && abs(scale(to)) + abs(scale(step)) <= limit;
    for (const auto &x : set) fits = fits && abs(scale(x)) <= limit;
    if (fits) kernel = GridKernel::build(window, l);
    if (kernel) {
      x0 = scale(from).get_si();
      dx = scale(step).get_si();
      for (const auto &x : set) lambdas.push_back(scale(x).get_si());
    }
  }

  if (kernel) {
    const auto sums = kernel->power_sums(x0, dx, count, lambdas, threads);
    const double delta = static_cast<double>(window.size()) * kFactorRounding;
    for (std::size_t i = 0; i < count; ++i) {
      out[i].q = sums[i];
      out[i].error = static_cast<double>(lambdas.size()) * (2.0 * delta + delta * delta + 0x1p-52);
    }
    return out;
  }
  parallel_for(count, threads, [&](std::size_t i) {
    const QValue v = q_function(window, set, out[i].xi, eps);
    out[i].q = v.value;
    out[i].error = v.error;
  });
  return out;
}

std::string to_string(SpectralVerdict v) {
  switch (v.kind) {
  case SpectralVerdictKind::Spectral: return "Spectral";
  case SpectralVerdictKind::NotSpectral: return "NotSpectral(" + std::to_string(v.level) + ")";
  case SpectralVerdictKind::UnknownBeyondHorizon:
    return "UnknownBeyondHorizon(" + std::to_string(v.level) + ")";
  }
  return "?";
}

std::string to_string(SpectrumStatus s) {
  switch (s) {
  case SpectrumStatus::Spectrum: return "Spectrum";
  case SpectrumStatus::OrthogonalityFail: return "OrthogonalityFail";
  case SpectrumStatus::CardinalityFail: return "CardinalityFail";
  }
  return "?";
}

} // namespace moran
