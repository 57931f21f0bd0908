#include <algorithm>
#include <bit>
#include <stdexcept>

#include "rclab/separability.hpp"

namespace rclab::sep {

std::vector<std::pair<int, int>> hiding_pair_indices(const PointSet& x, const PointSet& y) {
  const auto hull = geometry::convex_hull_facets(x);
  std::vector<int> in_aff;
  for (int i = 0; i < static_cast<int>(y.size()); ++i) {
    if (geometry::in_affine_hull(y[i], hull)) in_aff.push_back(i);
  }
  std::vector<std::pair<int, int>> out;
  for (std::size_t a = 0; a < in_aff.size(); ++a) {
    for (std::size_t b = a + 1; b < in_aff.size(); ++b) {
      if (geometry::segment_hits_hull(y[in_aff[a]], y[in_aff[b]], hull)) out.emplace_back(in_aff[a], in_aff[b]);
    }
  }
  return out;
}

std::vector<std::pair<Point, Point>> hiding_pairs(const PointSet& x, const PointSet& y) {
  std::vector<std::pair<Point, Point>> out;
  for (const auto& [i, j] : hiding_pair_indices(x, y)) out.emplace_back(y[i], y[j]);
  return out;
}

int max_hiding_set_bruteforce(const PointSet& x, const PointSet& y) {
  const auto hull = geometry::convex_hull_facets(x);
  std::vector<int> nodes;
  for (int i = 0; i < static_cast<int>(y.size()); ++i) {
    if (geometry::in_affine_hull(y[i], hull)) nodes.push_back(i);
  }
  const std::size_t n = y.size();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const auto& [i, j] : hiding_pair_indices(x, y)) adj[i][j] = adj[j][i] = true;

  int best = 0;
  std::vector<int> clique;
  auto extend = [&](auto&& self, std::vector<int> candidates) -> void {
    best = std::max(best, static_cast<int>(clique.size()));
    if (clique.size() + candidates.size() <= static_cast<std::size_t>(best)) return;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      const int v = candidates[k];
      std::vector<int> next;
      for (std::size_t m = k + 1; m < candidates.size(); ++m) {
        if (adj[v][candidates[m]]) next.push_back(candidates[m]);
      }
      clique.push_back(v);
      self(self, std::move(next));
      clique.pop_back();
    }
  };
  extend(extend, nodes);
  return best;
}

std::vector<std::uint32_t> separable_subsets(const Oracle& oracle, const PointSet& y) {
  const int n = static_cast<int>(y.size());
  if (n > 20) throw std::invalid_argument("separable_subsets: |Y| too large");
  // Separability is closed under subsets, so grow only from separable sets.
  std::vector<char> known(std::size_t{1} << n, 0);  // 0 unknown, 1 separable, 2 not
  std::vector<std::uint32_t> out{0};
  known[0] = 1;
  std::vector<std::uint32_t> layer{0};
  while (!layer.empty()) {
    std::vector<std::uint32_t> next;
    for (auto mask : layer) {
      const int top = mask == 0 ? -1 : 31 - std::countl_zero(mask);
      for (int i = top + 1; i < n; ++i) {
        const std::uint32_t grown = mask | (std::uint32_t{1} << i);
        bool subsets_ok = true;
        for (std::uint32_t rest = grown; rest && subsets_ok; rest &= rest - 1) {
          const std::uint32_t sub = grown & ~(rest & -rest);
          subsets_ok = known[sub] == 1;
        }
        if (!subsets_ok) {
          known[grown] = 2;
          continue;
        }
        std::vector<Point> f;
        for (int k = 0; k < n; ++k) {
          if (grown >> k & 1) f.push_back(y[k]);
        }
        known[grown] = oracle.separable(f) ? 1 : 2;
        if (known[grown] == 1) {
          out.push_back(grown);
          next.push_back(grown);
        }
      }
    }
    layer = std::move(next);
  }
  return out;
}

int rc_bruteforce(const PointSet& x, const PointSet& y, const Rational& eps) {
  const int n = static_cast<int>(y.size());
  if (n == 0) return 0;
  const Oracle oracle(x, eps);
  const auto family = separable_subsets(oracle, y);
  for (int i = 0; i < n; ++i) {
    if (std::find(family.begin(), family.end(), std::uint32_t{1} << i) == family.end()) {
      throw std::invalid_argument("rc_bruteforce: a point of Y is not eps-separable from X");
    }
  }
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  // Breadth-first over covered masks: level ℓ holds masks reachable with ℓ sets.
  std::vector<char> seen(std::size_t{1} << n, 0);
  std::vector<std::uint32_t> level{0};
  seen[0] = 1;
  for (int l = 1; l <= n; ++l) {
    std::vector<std::uint32_t> next;
    for (auto mask : level) {
      for (auto s : family) {
        const std::uint32_t m = mask | s;
        if (m == full) return l;
        if (!seen[m]) {
          seen[m] = 1;
          next.push_back(m);
        }
      }
    }
    level = std::move(next);
  }
  throw std::logic_error("rc_bruteforce: no cover found");
}

}  // namespace rclab::sep
