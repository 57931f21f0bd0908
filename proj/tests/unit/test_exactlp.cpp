#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "rclab/exactlp.hpp"

using namespace rclab;
using namespace rclab::lp;

TEST(ExactLp, BoundedMaximum) {
  LinearProgram p;
  p.sense = Sense::kMaximize;
  const int x = p.add_variable(1, Rational(0), std::nullopt);
  p.add_row({{x, 1}}, RowType::kLessEqual, 3);
  const auto sol = solve(p);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_EQ(sol.primal[0], Rational(3));
  EXPECT_EQ(sol.duals[0], Rational(1));
  EXPECT_EQ(check_optimality(p, sol), "");
}

TEST(ExactLp, InfeasibleWithFarkas) {
  LinearProgram p;
  const int x = p.add_variable(0, std::nullopt, std::nullopt);
  p.add_row({{x, 1}}, RowType::kLessEqual, -1);
  p.add_row({{x, 1}}, RowType::kGreaterEqual, 0);
  const auto sol = solve(p);
  ASSERT_EQ(sol.status, LpStatus::kInfeasible);
  EXPECT_TRUE(check_farkas(p, sol.duals));
}

TEST(ExactLp, Unbounded) {
  LinearProgram p;
  p.sense = Sense::kMaximize;
  const int x = p.add_variable(1, Rational(0), std::nullopt);
  const int y = p.add_variable(0, Rational(0), std::nullopt);
  p.add_row({{x, 1}, {y, -1}}, RowType::kLessEqual, 2);
  const auto sol = solve(p);
  ASSERT_EQ(sol.status, LpStatus::kUnbounded);
  ASSERT_EQ(sol.ray.size(), 2u);
  EXPECT_GT(sol.ray[0], Rational(0));
  EXPECT_LE(sol.ray[0] - sol.ray[1], Rational(0));
}

TEST(ExactLp, CoveringDual) {
  // Restricted master over the two singleton columns for X = {0}, Y = {-1, 1}.
  LinearProgram p;
  const int z1 = p.add_variable(1, Rational(0), std::nullopt);
  const int z2 = p.add_variable(1, Rational(0), std::nullopt);
  p.add_row({{z1, 1}}, RowType::kGreaterEqual, 1);
  p.add_row({{z2, 1}}, RowType::kGreaterEqual, 1);
  const auto sol = solve(p);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_EQ(sol.objective_value, Rational(2));
  EXPECT_EQ(sol.duals, (std::vector<Rational>{1, 1}));
  EXPECT_EQ(check_optimality(p, sol), "");
}

TEST(ExactLp, BealeCyclingInstanceTerminates) {
  // Beale's example; cycles under the textbook rule without a guard.
  LinearProgram p;
  std::vector<int> x;
  const std::vector<Rational> c = {Rational(-3, 4), 150, Rational(-1, 50), 6};
  for (int j = 0; j < 4; ++j) x.push_back(p.add_variable(c[j], Rational(0), std::nullopt));
  p.add_row({{0, Rational(1, 4)}, {1, -60}, {2, Rational(-1, 25)}, {3, 9}}, RowType::kLessEqual, 0);
  p.add_row({{0, Rational(1, 2)}, {1, -90}, {2, Rational(-1, 50)}, {3, 3}}, RowType::kLessEqual, 0);
  p.add_row({{2, 1}}, RowType::kLessEqual, 1);
  const auto sol = solve(p);
  ASSERT_EQ(sol.status, LpStatus::kOptimal);
  EXPECT_EQ(sol.objective_value, Rational(-1, 20));
  EXPECT_LT(sol.pivots, 100);
  EXPECT_EQ(check_optimality(p, sol), "");
}

namespace {

LinearProgram random_lp(std::mt19937& rng, int n, int m) {
  std::uniform_int_distribution<int> coef(-4, 4);
  std::uniform_int_distribution<int> kind(0, 5);
  LinearProgram p;
  p.sense = kind(rng) % 2 ? Sense::kMaximize : Sense::kMinimize;
  for (int j = 0; j < n; ++j) {
    const int k = kind(rng);
    std::optional<Rational> lo = k == 0 ? std::nullopt : std::optional<Rational>(Rational(-coef(rng) * coef(rng)));
    std::optional<Rational> hi = k == 1 ? std::nullopt : std::optional<Rational>(lo.value_or(Rational(-3)).abs() + 3 + coef(rng));
    if (lo && hi && *hi < *lo) std::swap(lo, hi);
    p.add_variable(coef(rng), lo, hi);
  }
  for (int i = 0; i < m; ++i) {
    std::vector<Rational> row(n);
    for (auto& v : row) v = coef(rng);
    const int k = kind(rng);
    const RowType t = k < 3 ? RowType::kLessEqual : (k < 5 ? RowType::kGreaterEqual : RowType::kEqual);
    p.add_dense_row(row, t, Rational(coef(rng) * 2, 1 + kind(rng)));
  }
  return p;
}

}  // namespace

TEST(ExactLp, RandomCertificatesAndRowPermutation) {
  std::mt19937 rng(2024);
  int optimal = 0;
  int infeasible = 0;
  for (int it = 0; it < 300; ++it) {
    const auto p = random_lp(rng, 3 + it % 5, 2 + it % 6);
    const auto sol = solve(p);
    if (sol.status == LpStatus::kOptimal) {
      ++optimal;
      EXPECT_EQ(check_optimality(p, sol), "") << "instance " << it;
      auto q = p;
      std::shuffle(q.rows.begin(), q.rows.end(), rng);
      const auto sol2 = solve(q);
      ASSERT_EQ(sol2.status, LpStatus::kOptimal);
      EXPECT_EQ(sol2.objective_value, sol.objective_value);
    } else if (sol.status == LpStatus::kInfeasible) {
      ++infeasible;
      EXPECT_TRUE(check_farkas(p, sol.duals)) << "instance " << it;
    } else {
      EXPECT_EQ(sol.status, LpStatus::kUnbounded);
    }
  }
  EXPECT_GT(optimal, 50);
  EXPECT_GT(infeasible, 5);
}

TEST(ExactLp, WarmStartMatchesColdSolve) {
  std::mt19937 rng(99);
  for (int it = 0; it < 150; ++it) {
    auto p = random_lp(rng, 4, 3);
    Simplex s(p);
    s.solve();
    // Tighten a bound, add a row, add a column, remove a row; compare with cold solves.
    const int v = it % 4;
    const auto lo = p.lower[v];
    p.upper[v] = lo ? *lo + 1 : Rational(1);
    s.set_bounds(v, p.lower[v], p.upper[v]);
    auto check = [&](const char* step) {
      const auto cold = solve(p);
      const auto st = s.solve();
      ASSERT_EQ(st, cold.status) << step << " " << it;
      if (st == LpStatus::kOptimal) {
        EXPECT_EQ(s.objective(), cold.objective_value) << step << " " << it;
        LpSolution warm;
        warm.status = st;
        warm.primal = s.primal();
        warm.duals = s.row_duals();
        warm.objective_value = s.objective();
        EXPECT_EQ(check_optimality(p, warm), "") << step << " " << it;
      } else if (st == LpStatus::kInfeasible) {
        EXPECT_TRUE(check_farkas(p, s.farkas())) << step << " " << it;
      }
    };
    check("bounds");
    Row r{{{0, 1}, {1, 1}, {2, -1}}, RowType::kLessEqual, Rational(2)};
    p.rows.push_back(r);
    s.add_row(r);
    check("row");
    std::vector<Term> col;
    for (int i = 0; i < static_cast<int>(p.rows.size()); ++i) col.push_back({i, Rational(i % 3 - 1)});
    const int nv = p.add_variable(-1, Rational(0), Rational(2));
    for (const auto& t : col) {
      if (!t.coef.is_zero()) p.rows[t.var].terms.push_back({nv, t.coef});
    }
    s.add_column(-1, Rational(0), Rational(2), col);
    check("column");
    p.rows.erase(p.rows.begin());
    s.remove_rows({0});
    check("remove");
  }
}
