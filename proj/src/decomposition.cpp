#include <algorithm>
#include <map>

#include "moran/errors.hpp"
#include "moran/spectra.hpp"
#include "pair_zero.hpp"

namespace moran {

namespace {

// Zero membership of differences between any two points of a fixed pool,
// for the lower window (levels 1..k) and the upper window (k+1..n).
class SplitZeros {
public:
  SplitZeros(const MoranSystem &system, std::size_t n, std::size_t k, std::vector<Rational> pool)
      : lower_(system, 1, k), upper_(system, k + 1, n), pool_(std::move(pool)) {
    std::sort(pool_.begin(), pool_.end());
    pool_.erase(std::unique(pool_.begin(), pool_.end()), pool_.end());
    lower_index_.emplace(lower_, pool_);
    upper_index_.emplace(upper_, pool_);
  }

  // Arguments are pool positions from index().
  bool in_lower(std::size_t x, std::size_t y) const { return lower_index_->level(x, y).has_value(); }
  bool in_upper(std::size_t x, std::size_t y) const { return upper_index_->level(x, y).has_value(); }
  const MeasureWindow &lower() const { return lower_; }
  const MeasureWindow &upper() const { return upper_; }

  std::size_t index(const Rational &x) const {
    return static_cast<std::size_t>(std::lower_bound(pool_.begin(), pool_.end(), x) - pool_.begin());
  }
  std::vector<std::size_t> indices(const CandidateSet &set) const {
    std::vector<std::size_t> out;
    out.reserve(set.size());
    for (const auto &x : set) out.push_back(index(x));
    return out;
  }

private:
  MeasureWindow lower_, upper_;
  std::vector<Rational> pool_;
  std::optional<detail::PairZeroIndex> lower_index_, upper_index_;
};

void check_split(const MoranSystem &system, std::size_t n, std::size_t k) {
  if (n == kInfiniteLevel || !system.is_addressable(n))
    throw InputError("decomposition needs a finite addressable level");
  if (k < 1 || k >= n)
    throw InputError("split " + std::to_string(k) + " must satisfy 1 <= k < " + std::to_string(n));
}

} // namespace

DecompositionResult suitable_decomposition(const MoranSystem &system, std::size_t n, std::size_t k,
                                           const CandidateSet &spectrum) {
  check_split(system, n, k);
  if (!spectrum.contains(Rational(0))) throw InputError("spectrum must contain 0");
  const SpectrumCertificate cert = is_spectrum(MeasureWindow::head(system, n), spectrum);
  if (!cert.is_spectrum())
    throw InputError("set is not a spectrum of levels 1.." + std::to_string(n) + " (" +
                     to_string(cert.status) + ")");

  const SplitZeros zeros(system, n, k, spectrum.elements());
  DecompositionResult result{system, n, k, spectrum, maximal_bizero_subset(zeros.lower(), spectrum),
                             {}, false};
  std::map<Rational, int> hits;
  const auto &elems = spectrum.elements();
  for (const auto &alpha : result.anchors) {
    const std::size_t a = zeros.index(alpha);
    std::vector<Rational> part{alpha};
    for (std::size_t l = 0; l < elems.size(); ++l) {
      if (l == a) continue;
      if (!zeros.in_lower(l, a) && zeros.in_upper(l, a)) part.push_back(elems[l]);
    }
    for (const auto &x : part) ++hits[x];
    result.parts.emplace(alpha, CandidateSet(std::move(part)));
  }
  result.partition = hits.size() == spectrum.size() &&
                     std::all_of(hits.begin(), hits.end(), [](const auto &h) { return h.second == 1; });
  return result;
}

DecompositionReport verify_decomposition(const DecompositionResult &result) {
  check_split(result.system, result.level, result.split);
  DecompositionReport report;

  // (a) partition
  std::map<Rational, std::vector<Rational>> owners;
  std::vector<Rational> pool = result.spectrum.elements();
  for (const auto &a : result.anchors) pool.push_back(a);
  for (const auto &[alpha, part] : result.parts) {
    pool.push_back(alpha);
    for (const auto &x : part) {
      owners[x].push_back(alpha);
      pool.push_back(x);
    }
  }
  report.partition = true;
  for (const auto &lambda : result.spectrum) {
    const auto it = owners.find(lambda);
    if (it == owners.end()) {
      report.partition = false;
      report.failures.push_back("(a) partition: " + lambda.str() + " lies in no part");
    } else if (it->second.size() > 1) {
      report.partition = false;
      report.failures.push_back("(a) partition: " + lambda.str() + " lies in parts " +
                                it->second[0].str() + " and " + it->second[1].str());
    }
  }
  for (const auto &[x, _] : owners) {
    if (!result.spectrum.contains(x)) {
      report.partition = false;
      report.failures.push_back("(a) partition: " + x.str() + " is not in the spectrum");
    }
  }

  const SplitZeros zeros(result.system, result.level, result.split, std::move(pool));

  // (b) anchors form a spectrum of the lower window
  const SpectrumCertificate anchors = is_spectrum(zeros.lower(), result.anchors);
  report.anchors_spectrum = anchors.is_spectrum();
  if (!report.anchors_spectrum) {
    std::string line = "(b) anchors: " + to_string(anchors.status);
    if (anchors.violation)
      line += " at " + anchors.violation->first.str() + ", " + anchors.violation->second.str();
    report.failures.push_back(line);
  }

  // (c) every part is a spectrum of the upper window
  report.parts_spectra = true;
  for (const auto &[alpha, part] : result.parts) {
    const SpectrumCertificate c = is_spectrum(zeros.upper(), part);
    if (c.is_spectrum()) continue;
    report.parts_spectra = false;
    std::string line = "(c) part " + alpha.str() + ": " + to_string(c.status);
    if (c.violation) line += " at " + c.violation->first.str() + ", " + c.violation->second.str();
    report.failures.push_back(line);
  }

  // (d) containments
  report.containments = true;
  auto fail = [&](const std::string &what, const Rational &x, const Rational &y) {
    report.containments = false;
    report.failures.push_back("(d) " + what + ": " + x.str() + " - " + y.str());
  };
  std::vector<std::vector<std::size_t>> positions;
  for (const auto &[alpha, part] : result.parts) positions.push_back(zeros.indices(part));
  std::size_t p = 0;
  for (auto it = result.parts.begin(); it != result.parts.end(); ++it, ++p) {
    const auto &elems = it->second.elements();
    const auto &ip = positions[p];
    for (std::size_t i = 0; i < ip.size(); ++i) {
      for (std::size_t j = i + 1; j < ip.size(); ++j) {
        if (!zeros.in_upper(ip[j], ip[i]) || zeros.in_lower(ip[j], ip[i]))
          fail("difference within part " + it->first.str() + " outside upper-only zeros", elems[j],
               elems[i]);
      }
    }
    std::size_t q = p + 1;
    for (auto jt = std::next(it); jt != result.parts.end(); ++jt, ++q) {
      const auto &jp = positions[q];
      for (std::size_t i = 0; i < ip.size(); ++i)
        for (std::size_t j = 0; j < jp.size(); ++j)
          if (ip[i] == jp[j] || !zeros.in_lower(ip[i], jp[j]))
            fail("difference across parts " + it->first.str() + ", " + jt->first.str() +
                     " outside lower zeros",
                 it->second.elements()[i], jt->second.elements()[j]);
    }
  }
  return report;
}

} // namespace moran
