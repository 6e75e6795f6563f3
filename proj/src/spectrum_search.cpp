#include <bit>
#include <cstdint>

#include "moran/errors.hpp"
#include "moran/spectra.hpp"

namespace moran {

namespace {

constexpr std::size_t kMaxGridPoints = 50'000'000;

class Bitset {
public:
  explicit Bitset(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool none() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  /// Index of the lowest set bit; only valid when !none().
  std::size_t first() const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k]) return k * 64 + static_cast<std::size_t>(std::countr_zero(words_[k]));
    return words_.size() * 64;
  }
  Bitset operator&(const Bitset &o) const {
    Bitset r = *this;
    for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] &= o.words_[k];
    return r;
  }
  Bitset &and_not(const Bitset &o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
    return *this;
  }

private:
  std::vector<std::uint64_t> words_;
};

class CliqueSearch {
public:
  CliqueSearch(std::vector<Bitset> adjacency, std::size_t target, std::size_t node_budget)
      : adj_(std::move(adjacency)), target_(target), node_budget_(node_budget) {}

  /// Lexicographically smallest clique of size target containing vertex 0.
  std::optional<std::vector<std::size_t>> run() {
    chosen_ = {0};
    if (target_ == 1) return chosen_;
    Bitset candidates = adj_[0];
    if (extend(candidates)) return chosen_;
    return std::nullopt;
  }

private:
  // Greedy colouring of the candidate set bounds the clique it can contribute.
  std::size_t colour_bound(Bitset rest) const {
    std::size_t colours = 0;
    while (!rest.none()) {
      ++colours;
      Bitset layer = rest;
      while (!layer.none()) {
        const std::size_t v = layer.first();
        layer.reset(v);
        rest.reset(v);
        layer.and_not(adj_[v]);
      }
    }
    return colours;
  }

  bool extend(Bitset candidates) {
    if (++nodes_ > node_budget_)
      throw ResourceLimit("clique search exceeded " + std::to_string(node_budget_) + " nodes");
    const std::size_t need = target_ - chosen_.size();
    if (candidates.count() < need) return false;
    if (colour_bound(candidates) < need) return false;
    while (!candidates.none()) {
      const std::size_t v = candidates.first();
      candidates.reset(v);
      chosen_.push_back(v);
      if (chosen_.size() == target_) return true;
      if (extend(candidates & adj_[v])) return true;
      chosen_.pop_back();
      if (candidates.count() < need) return false;
    }
    return false;
  }

  std::vector<Bitset> adj_;
  std::size_t target_;
  std::size_t node_budget_;
  std::size_t nodes_ = 0;
  std::vector<std::size_t> chosen_;
};

} // namespace

std::optional<CandidateSet> spectrum_search(const MeasureWindow &window, const SearchOptions &options) {
  if (window.is_infinite()) throw InputError("spectrum search needs a finite window");
  const MoranSystem &sys = window.system();
  const auto atoms = scaled_atoms(sys, window.first(), window.last());
  std::vector<std::int64_t> distinct = atoms;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const std::size_t target = distinct.size();

  // The transform is B_last-periodic and every zero lies on (1/G)Z.
  Integer grid = 1;
  for (std::size_t k = window.first(); k <= window.last(); ++k) {
    const DigitLevel lv = sys.level(k);
    grid = lcm(grid, Integer(lv.scale * lv.count));
  }
  const Integer period = level_product(sys, window.last());
  const Integer points = period * grid;
  if (points > Integer(static_cast<unsigned long>(kMaxGridPoints)))
    throw ResourceLimit("search grid has more than " + std::to_string(kMaxGridPoints) + " points");
  const auto kernel = GridKernel::build(window, grid);
  if (!kernel) throw ResourceLimit("window moduli exceed 64-bit search arithmetic");

  std::vector<std::int64_t> vertices{0};
  const std::int64_t total = points.get_si();
  for (std::int64_t x = 1; x < total; ++x) {
    if (kernel->zero_level(x)) {
      vertices.push_back(x);
      if (vertices.size() > options.vertex_budget)
        throw ResourceLimit("search graph exceeds the vertex budget of " +
                            std::to_string(options.vertex_budget));
    }
  }
  if (vertices.size() < target) return std::nullopt;

  const std::size_t n = vertices.size();
  std::vector<Bitset> adjacency(n, Bitset(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (kernel->zero_level(vertices[j] - vertices[i])) {
        adjacency[i].set(j);
        adjacency[j].set(i);
      }

  CliqueSearch search(std::move(adjacency), target, options.node_budget);
  const auto clique = search.run();
  if (!clique) return std::nullopt;
  std::vector<Rational> out;
  for (std::size_t v : *clique) out.push_back(Rational(Integer(vertices[v]), grid));
  return CandidateSet(std::move(out));
}

} // namespace moran
