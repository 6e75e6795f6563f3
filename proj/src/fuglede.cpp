#include "moran/fuglede.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "moran/errors.hpp"

namespace moran {

namespace {

std::string describe_levels(const std::vector<DigitLevel> &levels) {
  std::string out;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (k) out += " + ";
    const auto &lv = levels[k];
    if (lv.count == 1) {
      out += "{0}";
      continue;
    }
    if (lv.scale != 1) out += lv.scale.get_str();
    out += "{0.." + Integer(lv.count - 1).get_str() + "}";
  }
  return out;
}

std::vector<std::string> rational_strings(const CandidateSet &set) {
  std::vector<std::string> out;
  for (const auto &x : set) out.push_back(x.str());
  return out;
}

} // namespace

Rational kolmogorov_distance(const std::vector<std::int64_t> &atoms, const Integer &scale,
                             const Rational &right) {
  if (atoms.empty()) throw InputError("no atoms");
  if (right.sign() <= 0) throw InputError("interval must have positive length");
  std::vector<std::int64_t> sorted = atoms;
  std::sort(sorted.begin(), sorted.end());
  const Rational total(static_cast<long>(sorted.size()));
  auto g = [&](const Rational &x) {
    if (x.sign() <= 0) return Rational(0);
    if (x >= right) return Rational(1);
    return x / right;
  };
  Rational worst;
  std::size_t below = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const Rational x = Rational(Integer(static_cast<long>(sorted[i])), scale);
    const Rational gx = g(x);
    const Rational before = Rational(static_cast<long>(below)) / total;
    const Rational after = Rational(static_cast<long>(j)) / total;
    worst = std::max({worst, (gx - before).abs(), (after - gx).abs()});
    below = j;
    i = j;
  }
  return worst;
}

FugledeReport fuglede_report(const MoranSystem &system, std::size_t n) {
  if (n == kInfiniteLevel || !system.is_addressable(n))
    throw InputError("level " + std::to_string(n) + " not addressable");
  for (std::size_t k = 1; k <= n; ++k)
    if (system.level(k).scale != 1) throw InputError("report needs unit scales");
  FugledeReport r;
  r.level = n;
  const DigitLevel first = system.level(1);
  r.interval_right = Rational(first.count, first.base);
  r.verdict = truncation_spectral_verdict(system, n);
  if (r.verdict.kind != SpectralVerdictKind::Spectral) return r;

  r.spectrum = canonical_spectrum(system, n);
  r.complement = canonical_complement(system, n);
  r.length = r.complement->length;
  r.convolution_uniform =
      convolve_uniform_check(r.complement->digits, r.complement->complement, *r.length);
  std::vector<std::int64_t> sums;
  sums.reserve(r.complement->digits.elements.size() * r.complement->complement.elements.size());
  for (auto d : r.complement->digits.elements)
    for (auto c : r.complement->complement.elements) sums.push_back(d + c);
  r.kolmogorov_distance = kolmogorov_distance(sums, level_product(system, n), r.interval_right);
  return r;
}

std::string format_fuglede_text(const FugledeReport &r) {
  std::ostringstream out;
  auto row = [&](const std::string &key, const std::string &value) {
    out << std::left << std::setw(21) << key << value << '\n';
  };
  row("level", std::to_string(r.level));
  row("verdict", to_string(r.verdict));
  if (r.spectrum) {
    std::string list;
    for (const auto &x : *r.spectrum) list += (list.empty() ? "" : ",") + x.str();
    row("spectrum", list);
  }
  if (r.complement) {
    row("complement", describe_levels(r.complement->levels));
    row("complement_set", format_integer_list(r.complement->complement.elements));
  }
  row("convolution_uniform", r.convolution_uniform ? "true" : "false");
  row("interval", "[" + r.interval_left.str() + ", " + r.interval_right.str() + "]");
  if (r.length) row("L", std::to_string(*r.length));
  if (r.kolmogorov_distance) row("kolmogorov_distance", r.kolmogorov_distance->str());
  return out.str();
}

std::string format_fuglede_json(const FugledeReport &r) {
  nlohmann::ordered_json j;
  j["level"] = r.level;
  j["verdict"] = to_string(r.verdict);
  j["spectrum"] = r.spectrum ? nlohmann::ordered_json(rational_strings(*r.spectrum)) : nullptr;
  if (r.complement) {
    nlohmann::ordered_json levels = nlohmann::ordered_json::array();
    for (const auto &lv : r.complement->levels)
      levels.push_back({{"b", lv.base.get_str()}, {"N", lv.count.get_str()}, {"scale", lv.scale.get_str()}});
    j["complement"] = {{"levels", levels}, {"elements", r.complement->complement.elements}};
  } else {
    j["complement"] = nullptr;
  }
  j["convolution_uniform"] = r.convolution_uniform;
  j["interval"] = {r.interval_left.str(), r.interval_right.str()};
  j["L"] = r.length ? nlohmann::ordered_json(*r.length) : nullptr;
  j["kolmogorov_distance"] =
      r.kolmogorov_distance ? nlohmann::ordered_json(r.kolmogorov_distance->str()) : nullptr;
  return j.dump(2) + "\n";
}

} // namespace moran
