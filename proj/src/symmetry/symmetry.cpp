#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "rclab/symmetry.hpp"

namespace rclab::symmetry {

SymGraph build_symmetry_graph(const PointSet& x, const PointSet& y, bool translate) {
  SymGraph g;
  g.dim = x.dim();
  g.shift.assign(g.dim, 0);
  if (translate) {
    bool first = true;
    for (const auto* set : {&x, &y}) {
      for (const auto& p : *set) {
        for (int j = 0; j < g.dim; ++j) g.shift[j] = first ? p[j] : std::min(g.shift[j], p[j]);
        first = false;
      }
    }
  }
  g.nx = static_cast<int>(x.size());
  for (const auto* set : {&x, &y}) {
    for (const auto& p : *set) {
      Point q(g.dim);
      for (int j = 0; j < g.dim; ++j) q[j] = p[j] - g.shift[j];
      g.left.push_back(std::move(q));
      g.left_color.push_back(set == &x ? 0 : 1);
    }
  }
  std::map<std::pair<std::int64_t, int>, int> right;
  for (const auto& q : g.left) {
    for (int j = 0; j < g.dim; ++j) right.emplace(std::make_pair(q[j], j), 0);
  }
  for (auto& [key, id] : right) {
    id = static_cast<int>(g.right.size());
    g.right.push_back(key);
  }
  for (int l = 0; l < static_cast<int>(g.left.size()); ++l) {
    for (int j = 0; j < g.dim; ++j) g.edges.emplace_back(l, right.at({g.left[l][j], j}));
  }
  return g;
}

Point apply(const SymGraph& g, const std::vector<int>& pi, const Point& z) {
  Point out(g.dim);
  for (int j = 0; j < g.dim; ++j) out[j] = z[pi[j]] - g.shift[pi[j]] + g.shift[j];
  return out;
}

std::optional<PointPermutation> induced(const SymGraph& g, const PointSet& x, const PointSet& y,
                                        const std::vector<int>& pi) {
  PointPermutation out;
  out.pi = pi;
  for (const auto& p : x) {
    const int i = x.index_of(apply(g, pi, p));
    if (i < 0) return std::nullopt;
    out.psi.push_back(i);
  }
  for (const auto& p : y) {
    const int i = y.index_of(apply(g, pi, p));
    if (i < 0) return std::nullopt;
    out.phi.push_back(i);
  }
  return out;
}

namespace {

// Per coordinate: sorted (value, color, degree) triples of its right nodes.
std::vector<std::vector<std::tuple<std::int64_t, int, int>>> profiles(const SymGraph& g) {
  std::map<std::tuple<int, std::int64_t, int>, int> count;  // (coordinate, value, color) -> degree
  for (const auto& [l, r] : g.edges) {
    const auto& [v, j] = g.right[r];
    ++count[{j, v, g.left_color[l]}];
  }
  std::vector<std::vector<std::tuple<std::int64_t, int, int>>> out(g.dim);
  for (const auto& [key, deg] : count) {
    const auto& [j, v, c] = key;
    out[j].emplace_back(v, c, deg);
  }
  return out;
}

std::vector<int> compose(const std::vector<int>& first, const std::vector<int>& second) {
  std::vector<int> out(first.size());
  for (std::size_t j = 0; j < first.size(); ++j) out[j] = first[second[j]];
  return out;
}

std::set<std::vector<int>> closure(const std::vector<std::vector<int>>& gens, int d) {
  std::vector<int> id(d);
  std::iota(id.begin(), id.end(), 0);
  std::set<std::vector<int>> seen{id};
  std::vector<std::vector<int>> queue{id};
  while (!queue.empty()) {
    auto cur = std::move(queue.back());
    queue.pop_back();
    for (const auto& s : gens) {
      auto next = compose(cur, s);
      if (seen.insert(next).second) queue.push_back(std::move(next));
    }
  }
  return seen;
}

}  // namespace

std::vector<PointPermutation> symmetry_group(const SymGraph& g, const PointSet& x, const PointSet& y) {
  const auto prof = profiles(g);
  std::vector<int> pi(g.dim);
  std::iota(pi.begin(), pi.end(), 0);
  std::vector<PointPermutation> out;
  while (std::next_permutation(pi.begin(), pi.end())) {
    bool ok = true;
    for (int j = 0; j < g.dim && ok; ++j) ok = prof[j] == prof[pi[j]];
    if (!ok) continue;
    if (auto p = induced(g, x, y, pi)) out.push_back(std::move(*p));
  }
  return out;
}

std::vector<PointPermutation> automorphism_generators(const SymGraph& g, const PointSet& x, const PointSet& y) {
  std::vector<PointPermutation> gens;
  std::vector<std::vector<int>> pis;
  std::set<std::vector<int>> group = closure(pis, g.dim);
  for (auto& p : symmetry_group(g, x, y)) {
    if (group.contains(p.pi)) continue;
    pis.push_back(p.pi);
    gens.push_back(std::move(p));
    group = closure(pis, g.dim);
  }
  return gens;
}

std::vector<std::vector<int>> y_generators(const PointSet& x, const PointSet& y, bool translate) {
  const auto g = build_symmetry_graph(x, y, translate);
  std::vector<std::vector<int>> out;
  for (const auto& p : automorphism_generators(g, x, y)) out.push_back(p.phi);
  return out;
}

}  // namespace rclab::symmetry
