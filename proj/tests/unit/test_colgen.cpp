#include <gtest/gtest.h>

#include <random>

#include "rclab/colgen.hpp"
#include "rf_check.hpp"
#include "support.hpp"

using namespace rclab;
using namespace rclab::cg;
using testsupport::cross;
using testsupport::cube;
using testsupport::simplex;
using testsupport::square_ring;

namespace {

const Rational kEps(1, 1000);

Column col(std::vector<int> members, int id) {
  Column c;
  c.members = std::move(members);
  c.id = id;
  return c;
}

Rational weight_of(std::span<const Rational> w, std::uint32_t mask) {
  Rational s = 0;
  for (int i : testsupport::members_of(mask)) s += w[i];
  return s;
}

}  // namespace

TEST(InitialColumns, SinglePoint) {
  const auto inst = models::make_instance(PointSet(1, {{0}}), PointSet(1, {{-1}, {1}}), kEps);
  const auto cols = initial_columns(inst);
  ASSERT_EQ(cols.size(), 2u);
  EXPECT_EQ(cols[0].members.size(), 1u);
  EXPECT_EQ(cols[1].members.size(), 1u);
}

TEST(InitialColumns, SquareRing) {
  const auto inst = models::make_instance(cube(2), square_ring(), kEps);
  const auto cols = initial_columns(inst);
  ASSERT_EQ(cols.size(), 4u + 12u);
  const sep::Oracle oracle(inst.x, kEps);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(cols[i].members.size(), 4u);
  for (const auto& c : cols) {
    std::vector<geometry::Point> pts;
    for (int m : c.members) pts.push_back(inst.y[m]);
    EXPECT_TRUE(oracle.certifies(c.witness, pts));
  }
}

TEST(InitialColumns, InseparableSingletonRejected) {
  const auto inst = models::make_instance(PointSet(1, {{0}}), PointSet(1, {{1}}), Rational(5));
  EXPECT_THROW((void)initial_columns(inst), std::invalid_argument);
}

TEST(RyanFoster, Fractionality) {
  EXPECT_EQ(fractionality(Rational(3, 10)), Rational(1, 5));
  EXPECT_EQ(fractionality(Rational(1, 2)), Rational(0));
  EXPECT_EQ(fractionality(Rational(0)), Rational(1, 2));
  EXPECT_EQ(fractionality(Rational(9, 10)), Rational(2, 5));
}

TEST(RyanFoster, Allows) {
  const RfDecision differ{0, 1, RfMode::kDiffer};
  const RfDecision together{0, 1, RfMode::kTogether};
  EXPECT_FALSE(allows(differ, std::vector<int>{0, 1, 2}));
  EXPECT_TRUE(allows(differ, std::vector<int>{0, 2}));
  EXPECT_TRUE(allows(together, std::vector<int>{0, 1, 2}));
  EXPECT_TRUE(allows(together, std::vector<int>{2}));
  EXPECT_FALSE(allows(together, std::vector<int>{0, 2}));
  EXPECT_FALSE(allows(together, std::vector<int>{1}));
  const std::vector<Column> pool{col({0, 1}, 0), col({0}, 1), col({1, 2}, 2), col({2}, 3)};
  const std::vector<RfDecision> ds{together};
  EXPECT_EQ(enabled_columns(pool, ds), (std::vector<int>{0, 3}));
}

TEST(RyanFoster, SelectsMostFractionalIntersectingPair) {
  const std::vector<Column> pool{col({0}, 0), col({1, 2}, 1), col({2, 3}, 2), col({3}, 3)};
  const std::vector<Rational> z{Rational(9, 10), Rational(1, 2), Rational(1, 2), Rational(1, 2)};
  const auto ch = ryan_foster_select(z, pool);
  ASSERT_TRUE(ch);
  EXPECT_EQ(ch->col_i, 1);
  EXPECT_EQ(ch->col_j, 2);
  EXPECT_EQ(ch->differ.y1, 2);
  EXPECT_EQ(ch->differ.y2, 1);
  EXPECT_EQ(ch->differ.mode, RfMode::kDiffer);
  EXPECT_EQ(ch->together.mode, RfMode::kTogether);

  const std::vector<Rational> integral{Rational(1), Rational(1), Rational(0), Rational(1)};
  EXPECT_FALSE(ryan_foster_select(integral, pool));
  const std::vector<Rational> disjoint{Rational(1, 2), Rational(1, 2), Rational(0), Rational(1, 2)};
  EXPECT_FALSE(ryan_foster_select(disjoint, pool));
}

TEST(RyanFoster, ChildrenPartitionIntegralCovers) {
  std::mt19937 rng(7);
  testsupport::RfCheck check;
  const sep::Oracle square(cube(2), kEps);
  PointSet ring8(2);
  for (int i = 0; i < 8; ++i) ring8.add(square_ring()[i]);
  testsupport::check_ryan_foster(square, ring8, 15, rng, check);
  const sep::Oracle tri(simplex(2), kEps);
  testsupport::check_ryan_foster(tri, geometry::l1_neighborhood(simplex(2), 1), 15, rng, check);
  EXPECT_GE(check.fractional, 20);
  EXPECT_EQ(check.failures, 0) << check.first_failure;
}

TEST(Pricing, Examples) {
  const auto inst = models::make_instance(PointSet(1, {{0}}), PointSet(1, {{-1}, {1}}), kEps);
  const sep::Oracle oracle(inst.x, kEps);
  const std::vector<Rational> w{Rational(1), Rational(1)};
  auto r = price(inst, oracle, w, {}, Rational(1));
  EXPECT_TRUE(r.complete);
  EXPECT_FALSE(r.column);
  const std::vector<Rational> w2{Rational(0), Rational(3, 2)};
  r = price(inst, oracle, w2, {}, Rational(1));
  ASSERT_TRUE(r.column);
  EXPECT_EQ(r.column->members, std::vector<int>{1});
  EXPECT_EQ(r.value, Rational(3, 2));
}

TEST(Pricing, MatchesEnumeration) {
  std::mt19937 rng(11);
  const std::vector<std::pair<PointSet, PointSet>> cases{
      {cube(2), square_ring()},
      {simplex(2), geometry::l1_neighborhood(simplex(2), 1)},
      {cross(2), geometry::l1_neighborhood(cross(2), 1)},
  };
  for (const auto& [x, y] : cases) {
    const auto inst = models::make_instance(x, y, kEps);
    const sep::Oracle oracle(x, kEps);
    const auto subsets = sep::separable_subsets(oracle, y);
    const int ny = static_cast<int>(y.size());
    for (int round = 0; round < 12; ++round) {
      std::vector<Rational> w(ny);
      for (auto& v : w) v = Rational(static_cast<std::int64_t>(rng() % 4), 4);
      std::vector<RfDecision> ds;
      if (round % 3 == 1) ds.push_back({0, 1, RfMode::kDiffer});
      if (round % 3 == 2) ds.push_back({0, ny - 1, RfMode::kTogether});
      Rational best = 0;
      for (auto mask : subsets) {
        if (allows_all(ds, testsupport::members_of(mask))) best = max(best, weight_of(w, mask));
      }
      const auto r = price(inst, oracle, w, ds, Rational(1));
      ASSERT_TRUE(r.complete);
      if (best > Rational(1)) {
        ASSERT_TRUE(r.column);
        EXPECT_EQ(r.value, best);
        Rational got = 0;
        std::vector<geometry::Point> pts;
        for (int m : r.column->members) {
          got += w[m];
          pts.push_back(y[m]);
        }
        EXPECT_EQ(got, r.value);
        EXPECT_TRUE(allows_all(ds, r.column->members));
        EXPECT_TRUE(oracle.certifies(r.column->witness, pts));
      } else {
        EXPECT_FALSE(r.column);
      }
    }
  }
}

TEST(Colgen, EmptyY) {
  const auto res = solve_colgen(models::make_instance(cube(2), PointSet(2), kEps));
  EXPECT_EQ(res.status, mip::MipStatus::kOptimal);
  EXPECT_EQ(res.value, 0);
}

TEST(Colgen, SquareRingRoot) {
  const auto inst = models::make_instance(cube(2), square_ring(), kEps);
  const auto res = solve_colgen(inst);
  EXPECT_EQ(res.status, mip::MipStatus::kOptimal);
  ASSERT_TRUE(res.root_lp);
  EXPECT_EQ(*res.root_lp, Rational(8, 3));
  EXPECT_EQ(res.value, 3);
  EXPECT_GE(*res.root_lp, Rational(sep::max_hiding_set_bruteforce(inst.x, inst.y)));
  EXPECT_TRUE(sep::verify_relaxation(inst.x, inst.y, res.relaxation, kEps));

  const auto rb = root_bounds(inst);
  EXPECT_EQ(rb.dual_bound, 3);
  ASSERT_TRUE(rb.lp_value);
  EXPECT_EQ(*rb.lp_value, Rational(8, 3));
  ASSERT_TRUE(rb.incumbent);
  EXPECT_GE(rb.incumbent->size(), 3u);
}

TEST(Colgen, MatchesBruteforce) {
  std::vector<std::pair<PointSet, PointSet>> cases;
  for (int d = 1; d <= 2; ++d) {
    for (const auto& x : {cube(d), cross(d), simplex(d)}) cases.push_back({x, geometry::l1_neighborhood(x, 1)});
  }
  cases.push_back({PointSet(2, {{0, 0}, {1, 0}, {2, 0}}), PointSet(2, {{0, 1}, {3, 0}, {-1, 0}, {1, -1}})});
  for (const auto& [x, y] : cases) {
    const auto inst = models::make_instance(x, y, kEps);
    for (bool hiding : {false, true}) {
      ColgenOptions o;
      o.hiding = hiding;
      const auto res = solve_colgen(inst, o);
      EXPECT_EQ(res.status, mip::MipStatus::kOptimal);
      EXPECT_EQ(res.value, sep::rc_bruteforce(x, y, kEps));
      EXPECT_TRUE(sep::verify_relaxation(x, y, res.relaxation, kEps));
    }
  }
}

TEST(Colgen, GreedyCover) {
  const std::vector<Column> pool{col({0}, 0), col({0, 1, 2}, 1), col({2, 3}, 2), col({3}, 3)};
  EXPECT_EQ(greedy_cover(4, pool), (std::vector<int>{1, 2}));
  EXPECT_FALSE(greedy_cover(5, pool));
}
