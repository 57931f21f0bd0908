#include <gtest/gtest.h>

#include <map>
#include <random>

#include "rclab/mipcore.hpp"

using namespace rclab;
using namespace rclab::mip;

namespace {

Model random_binary_program(std::mt19937& rng, int n, int m) {
  std::uniform_int_distribution<int> coef(-3, 5);
  Model model;
  model.lp.sense = rng() % 2 ? lp::Sense::kMaximize : lp::Sense::kMinimize;
  for (int j = 0; j < n; ++j) model.add_binary(coef(rng));
  for (int i = 0; i < m; ++i) {
    std::vector<lp::Term> terms;
    int sum = 0;
    for (int j = 0; j < n; ++j) {
      const int c = coef(rng);
      if (c != 0) terms.push_back({j, c});
      sum += std::max(c, 0);
    }
    model.add_row(terms, i % 2 ? lp::RowType::kLessEqual : lp::RowType::kGreaterEqual,
                  i % 2 ? sum / 2 : sum / 4);
  }
  return model;
}

std::optional<Rational> enumerate(const Model& model) {
  const int n = model.lp.num_vars;
  std::optional<Rational> best;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<Rational> x(n);
    for (int j = 0; j < n; ++j) x[j] = (mask >> j) & 1;
    bool ok = true;
    for (const auto& row : model.lp.rows) {
      const Rational a = row.activity(x);
      if (row.type == lp::RowType::kLessEqual && a > row.rhs) ok = false;
      if (row.type == lp::RowType::kGreaterEqual && a < row.rhs) ok = false;
    }
    if (!ok) continue;
    Rational v = 0;
    for (int j = 0; j < n; ++j) v += model.lp.objective[j] * x[j];
    const bool maxi = model.lp.sense == lp::Sense::kMaximize;
    if (!best || (maxi ? v > *best : v < *best)) best = v;
  }
  return best;
}

class CountingPricer : public Pricer {
 public:
  int price(Solver&, std::span<const Rational>) override { return 0; }
  int price_infeasible(Solver&, std::span<const Rational>) override { return 0; }
};

}  // namespace

TEST(Mipcore, CoveringToy) {
  Model model;
  model.add_binary(1);
  model.add_binary(1);
  model.add_row({{0, 1}, {1, 1}}, lp::RowType::kGreaterEqual, 1);
  model.objective_integral = true;
  Solver solver(model);
  const auto r = solver.solve();
  EXPECT_EQ(r.status, MipStatus::kOptimal);
  EXPECT_EQ(*r.primal_bound, Rational(1));
}

TEST(Mipcore, MatchesEnumerationOnRandomPrograms) {
  std::mt19937 rng(17);
  for (int it = 0; it < 60; ++it) {
    const auto model = random_binary_program(rng, 4 + it % 6, 2 + it % 4);
    const auto expected = enumerate(model);
    Options opts;
    opts.trace_bounds = true;
    Solver solver(model, opts);
    const auto r = solver.solve();
    if (!expected) {
      EXPECT_EQ(r.status, MipStatus::kInfeasible) << it;
      continue;
    }
    ASSERT_EQ(r.status, MipStatus::kOptimal) << it;
    EXPECT_EQ(*r.primal_bound, *expected) << it;
    // Bounds never get weaker down a path.
    const bool maxi = model.lp.sense == lp::Sense::kMaximize;
    std::map<int, Rational> bound_of;
    for (const auto& t : r.trace) {
      auto it2 = bound_of.find(t.parent);
      if (it2 != bound_of.end()) {
        if (maxi) {
          EXPECT_LE(t.bound, it2->second);
        } else {
          EXPECT_GE(t.bound, it2->second);
        }
      }
      bound_of[t.id] = t.bound;
    }
  }
}

TEST(Mipcore, PreloadedOptimumIsKept) {
  std::mt19937 rng(4);
  for (int it = 0; it < 20; ++it) {
    const auto model = random_binary_program(rng, 6, 3);
    const auto expected = enumerate(model);
    if (!expected) continue;
    Solver first(model);
    const auto r1 = first.solve();
    Solver second(model);
    ASSERT_TRUE(second.set_incumbent(r1.incumbent));
    const auto r2 = second.solve();
    EXPECT_EQ(*r2.primal_bound, *expected);
    EXPECT_LE(r2.node_count, r1.node_count);
  }
}

TEST(Mipcore, SecondPricerIsRejected) {
  Model model;
  model.add_binary(1);
  Solver solver(model);
  solver.register_pricer(std::make_shared<CountingPricer>());
  EXPECT_THROW(solver.register_pricer(std::make_shared<CountingPricer>()), std::logic_error);
}

TEST(Mipcore, MostFractional) {
  const std::vector<bool> ints(2, true);
  EXPECT_EQ(most_fractional(std::vector<Rational>{Rational(1, 2), Rational(1, 5)}, ints), 0);
  EXPECT_EQ(most_fractional(std::vector<Rational>{Rational(9, 10), Rational(3, 5)}, ints), 1);
  EXPECT_EQ(most_fractional(std::vector<Rational>{Rational(3, 10), Rational(7, 10)}, ints), 0);
  EXPECT_EQ(most_fractional(std::vector<Rational>{Rational(1), Rational(0)}, ints), -1);
}

TEST(LexGe, Examples) {
  // Variables: v = (0, 1), w = (2, 3).
  const std::vector<int> v{0, 1};
  const std::vector<int> w{2, 3};
  auto run = [&](std::vector<int> fixed) {
    std::vector<Rational> lo(4, Rational(0));
    std::vector<Rational> hi(4, Rational(1));
    for (int j = 0; j < 4; ++j) {
      if (fixed[j] >= 0) lo[j] = hi[j] = fixed[j];
    }
    return lex_ge_propagate(v, w, lo, hi);
  };
  auto r1 = run({1, -1, 1, -1});
  EXPECT_FALSE(r1.infeasible);
  EXPECT_TRUE(r1.fixings.empty());
  auto r2 = run({0, -1, -1, -1});
  ASSERT_EQ(r2.fixings.size(), 1u);
  EXPECT_EQ(r2.fixings[0], std::make_pair(2, 0));
  EXPECT_TRUE(run({0, -1, 1, -1}).infeasible);
  // Tie at the first position cannot be completed: v2 = 0, w2 = 1.
  auto r3 = run({-1, 0, -1, 1});
  EXPECT_EQ(r3.fixings, (std::vector<std::pair<int, int>>{{0, 1}, {2, 0}}));
}

TEST(LexGe, PropagationAndCutsAreSoundByEnumeration) {
  std::mt19937 rng(8);
  const int n = 4;
  for (int it = 0; it < 400; ++it) {
    // v and w draw from 6 variables, possibly sharing some.
    std::vector<int> v(n), w(n);
    for (int i = 0; i < n; ++i) {
      v[i] = static_cast<int>(rng() % 6);
      w[i] = static_cast<int>(rng() % 6);
    }
    std::vector<Rational> lo(6, Rational(0)), hi(6, Rational(1));
    for (int j = 0; j < 6; ++j) {
      const int r = static_cast<int>(rng() % 4);
      if (r < 2) lo[j] = hi[j] = r;
    }
    auto feasible = [&](int mask) {
      for (int j = 0; j < 6; ++j) {
        const int b = (mask >> j) & 1;
        if (Rational(b) < lo[j] || Rational(b) > hi[j]) return false;
      }
      for (int i = 0; i < n; ++i) {
        const int a = (mask >> v[i]) & 1;
        const int b = (mask >> w[i]) & 1;
        if (a != b) return a > b;
      }
      return true;
    };
    const auto res = lex_ge_propagate(v, w, lo, hi);
    bool any = false;
    for (int mask = 0; mask < 64; ++mask) {
      if (!feasible(mask)) continue;
      any = true;
      for (const auto& [var, val] : res.fixings) EXPECT_EQ((mask >> var) & 1, val) << it;
    }
    if (res.infeasible) EXPECT_FALSE(any) << it;

    std::vector<Rational> x(6);
    for (auto& val : x) val = Rational(static_cast<int>(rng() % 5), 4);
    const auto cut = lex_ge_cover_cut(v, w, x);
    if (!cut) continue;
    EXPECT_LT(cut->activity(x), cut->rhs);
    for (int mask = 0; mask < 64; ++mask) {
      std::vector<Rational> pt(6);
      for (int j = 0; j < 6; ++j) pt[j] = (mask >> j) & 1;
      bool lex_ok = true;
      for (int i = 0; i < n; ++i) {
        const int a = (mask >> v[i]) & 1;
        const int b = (mask >> w[i]) & 1;
        if (a != b) {
          lex_ok = a > b;
          break;
        }
      }
      if (lex_ok) EXPECT_GE(cut->activity(pt), cut->rhs) << it;
    }
  }
}
