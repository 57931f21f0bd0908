#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rclab/geometry.hpp"

namespace rclab::symmetry {

using geometry::Point;
using geometry::PointSet;

/// Colored bipartite graph: left nodes are the points of X then Y (colors 0
/// and 1), right nodes are the occurring pairs (value, coordinate); z is
/// adjacent to (v, j) iff z_j = v. Coordinates are shifted by -μ first.
struct SymGraph {
  int dim = 0;
  Point shift;  // μ, the coordinatewise minimum over X ∪ Y
  std::vector<Point> left;
  std::vector<int> left_color;
  std::vector<std::pair<std::int64_t, int>> right;  // (value, coordinate)
  std::vector<std::pair<int, int>> edges;           // (left, right)
  int nx = 0;
};

[[nodiscard]] SymGraph build_symmetry_graph(const PointSet& x, const PointSet& y, bool translate = true);

/// A coordinate permutation with its induced maps: the image of z has
/// coordinates (π z)_j = z_{pi[j]} (relative to the shift); phi and psi map
/// indices of Y and X to the indices of their images.
struct PointPermutation {
  std::vector<int> pi;
  std::vector<int> phi;
  std::vector<int> psi;
};

/// Image of a point under pi in the graph's shifted frame, mapped back.
[[nodiscard]] Point apply(const SymGraph& g, const std::vector<int>& pi, const Point& z);

/// Induced maps of pi if it fixes X and Y setwise, otherwise nothing.
[[nodiscard]] std::optional<PointPermutation> induced(const SymGraph& g, const PointSet& x, const PointSet& y,
                                                      const std::vector<int>& pi);

/// Every non-identity coordinate permutation fixing X and Y (d ≤ 8).
[[nodiscard]] std::vector<PointPermutation> symmetry_group(const SymGraph& g, const PointSet& x, const PointSet& y);

/// A generating set of the group found by enumerating S_d with the graph's
/// value profiles as a filter.
[[nodiscard]] std::vector<PointPermutation> automorphism_generators(const SymGraph& g, const PointSet& x,
                                                                    const PointSet& y);

/// Y-index permutations of the generators (input for advanced symmetry handling).
[[nodiscard]] std::vector<std::vector<int>> y_generators(const PointSet& x, const PointSet& y, bool translate = true);

}  // namespace rclab::symmetry
