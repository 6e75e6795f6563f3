#pragma once

// Zero-set membership of pairwise differences of a fixed point list,
// using GridKernel when the points share a 64-bit lattice.

#include <cstdint>
#include <optional>
#include <vector>

#include "moran/fourier.hpp"

namespace moran::detail {

class PairZeroIndex {
public:
  PairZeroIndex(const MeasureWindow &window, const std::vector<Rational> &points)
      : window_(&window), points_(&points) {
    if (window.is_infinite() || points.empty()) return;
    Integer denominator = 1;
    for (const auto &p : points) denominator = lcm(denominator, p.den());
    const Integer limit = Integer(GridKernel::kMaxNumerator / 2);
    std::vector<std::int64_t> scaled;
    scaled.reserve(points.size());
    for (const auto &p : points) {
      const Integer x = p.num() * (denominator / p.den());
      if (abs(x) > limit) return;
      scaled.push_back(x.get_si());
    }
    const auto kernel = GridKernel::build(window, denominator);
    if (!kernel) return;
    fast_ = true;
    // x - y lies in a level's stratum iff x = y mod q and x != y mod r.
    for (const auto &m : kernel->zero_moduli()) {
      Residues res{m.index, {}, {}, m.r != 0};
      res.q.reserve(scaled.size());
      for (const std::int64_t x : scaled) {
        res.q.push_back(((x % m.q) + m.q) % m.q);
        if (res.bounded) res.r.push_back(((x % m.r) + m.r) % m.r);
      }
      residues_.push_back(std::move(res));
    }
  }

  bool fast() const { return fast_; }

  /// Smallest window level whose zero stratum contains points[i] - points[j].
  std::optional<std::size_t> level(std::size_t i, std::size_t j) const {
    if (fast_) {
      for (const Residues &res : residues_)
        if (res.q[i] == res.q[j] && (!res.bounded || res.r[i] != res.r[j])) return res.level;
      return std::nullopt;
    }
    const auto hit = zero_stratum(*window_, (*points_)[i] - (*points_)[j]);
    if (!hit) return std::nullopt;
    return hit->level;
  }

private:
  const MeasureWindow *window_;
  const std::vector<Rational> *points_;
  struct Residues {
    std::size_t level;
    std::vector<std::int64_t> q, r;
    bool bounded;
  };
  bool fast_ = false;
  std::vector<Residues> residues_;
};

} // namespace moran::detail
