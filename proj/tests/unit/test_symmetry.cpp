#include <gtest/gtest.h>

#include <set>

#include "rclab/symmetry.hpp"
#include "support.hpp"

using namespace rclab;
using namespace rclab::symmetry;
using testsupport::cross;
using testsupport::cube;
using testsupport::simplex;
using testsupport::square_ring;

namespace {

PointSet translated(const PointSet& s, const Point& t) {
  PointSet out(s.dim());
  for (const auto& p : s) {
    Point q = p;
    for (int j = 0; j < s.dim(); ++j) q[j] += t[j];
    out.add(q);
  }
  return out;
}

std::vector<int> compose(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = b[a[j]];
  return out;
}

// Size of the group generated by the coordinate permutations.
std::size_t closure_size(const std::vector<PointPermutation>& gens, int d) {
  std::vector<int> id(d);
  for (int j = 0; j < d; ++j) id[j] = j;
  std::set<std::vector<int>> seen{id};
  std::vector<std::vector<int>> todo{id};
  while (!todo.empty()) {
    const auto cur = todo.back();
    todo.pop_back();
    for (const auto& g : gens) {
      auto next = compose(cur, g.pi);
      if (seen.insert(next).second) todo.push_back(next);
    }
  }
  return seen.size();
}

}  // namespace

TEST(SymmetryGraph, SquareRing) {
  const auto g = build_symmetry_graph(cube(2), square_ring());
  EXPECT_EQ(g.shift, (Point{-1, -1}));
  EXPECT_EQ(g.right.size(), 8u);
  EXPECT_EQ(g.left.size(), 16u);
  EXPECT_EQ(g.edges.size(), 32u);
  EXPECT_EQ(g.nx, 4);
  EXPECT_EQ(apply(g, {1, 0}, {-1, 0}), (Point{0, -1}));
}

TEST(Symmetry, TranslationExposesTheSwap) {
  const Point t{1, 2};
  const auto x = translated(simplex(2), t);
  const auto y = geometry::l1_neighborhood(x, 1);
  const auto with = build_symmetry_graph(x, y, true);
  const auto gens = automorphism_generators(with, x, y);
  ASSERT_EQ(gens.size(), 1u);
  EXPECT_EQ(gens[0].pi, (std::vector<int>{1, 0}));
  EXPECT_EQ(y_generators(x, y, true).size(), 1u);

  const auto without = build_symmetry_graph(x, y, false);
  EXPECT_TRUE(automorphism_generators(without, x, y).empty());
  EXPECT_TRUE(y_generators(x, y, false).empty());
}

TEST(Symmetry, InducedMapsArePermutations) {
  const auto x = cube(2);
  const auto y = square_ring();
  const auto g = build_symmetry_graph(x, y);
  const auto p = induced(g, x, y, {1, 0});
  ASSERT_TRUE(p);
  std::set<int> image(p->phi.begin(), p->phi.end());
  EXPECT_EQ(image.size(), y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    EXPECT_EQ(p->phi[p->phi[i]], static_cast<int>(i));
    EXPECT_EQ(y[p->phi[i]], (Point{y[i][1], y[i][0]}));
  }
  EXPECT_EQ(p->psi.size(), x.size());
}

TEST(Symmetry, AsymmetricSetsHaveNone) {
  const PointSet x(2, {{0, 0}, {1, 0}, {2, 0}, {0, 1}});
  const auto y = geometry::l1_neighborhood(x, 1);
  const auto g = build_symmetry_graph(x, y);
  EXPECT_TRUE(symmetry_group(g, x, y).empty());
  EXPECT_TRUE(automorphism_generators(g, x, y).empty());

  const PointSet line(1, {{0}, {1}});
  const auto yl = geometry::l1_neighborhood(line, 1);
  EXPECT_TRUE(automorphism_generators(build_symmetry_graph(line, yl), line, yl).empty());
}

TEST(Symmetry, GeneratorsSpanTheGroup) {
  for (int d = 2; d <= 4; ++d) {
    for (const auto& x : {cube(d), cross(d), simplex(d)}) {
      const auto y = geometry::l1_neighborhood(x, 1);
      const auto g = build_symmetry_graph(x, y);
      const auto group = symmetry_group(g, x, y);
      const auto gens = automorphism_generators(g, x, y);
      std::size_t factorial = 1;
      for (int i = 2; i <= d; ++i) factorial *= i;
      EXPECT_EQ(group.size() + 1, factorial);
      EXPECT_EQ(closure_size(gens, d), group.size() + 1);
      EXPECT_LE(gens.size(), static_cast<std::size_t>(d - 1));
      for (const auto& p : gens) EXPECT_TRUE(induced(g, x, y, p.pi));
    }
  }
}

TEST(Symmetry, PartialGroup) {
  // Swapping the first two coordinates only.
  const PointSet x(3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 2}});
  const auto y = geometry::l1_neighborhood(x, 1);
  const auto g = build_symmetry_graph(x, y);
  const auto group = symmetry_group(g, x, y);
  ASSERT_EQ(group.size(), 1u);
  EXPECT_EQ(group[0].pi, (std::vector<int>{1, 0, 2}));
}
