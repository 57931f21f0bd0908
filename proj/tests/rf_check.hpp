#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "rclab/colgen.hpp"
#include "rclab/exactlp.hpp"

namespace testsupport {

using rclab::Rational;

/// Every partition of {0..ny-1} into ε-separable blocks (bitmasks).
inline std::vector<std::vector<std::uint32_t>> separable_partitions(int ny, const std::set<std::uint32_t>& separable) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> cur;
  const std::uint32_t all = ny == 32 ? ~0u : (1u << ny) - 1;
  std::function<void(std::uint32_t)> rec = [&](std::uint32_t left) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    const std::uint32_t low = left & (~left + 1);
    const std::uint32_t rest = left & ~low;
    for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
      const std::uint32_t block = sub | low;
      if (separable.count(block)) {
        cur.push_back(block);
        rec(left & ~block);
        cur.pop_back();
      }
      if (sub == 0) break;
    }
  };
  rec(all);
  return out;
}

inline std::vector<int> members_of(std::uint32_t mask) {
  std::vector<int> m;
  for (int i = 0; mask >> i; ++i) {
    if ((mask >> i) & 1) m.push_back(i);
  }
  return m;
}

/// Checks the branching pair of a fractional master solution: it exists, both
/// children cut off the current point and, when `partitions` is given, every
/// partition of Y into separable blocks is admitted by exactly one child.
inline std::optional<std::string> check_choice(std::span<const Rational> z, std::span<const rclab::cg::Column> pool,
                                               const std::vector<std::vector<std::uint32_t>>* partitions) {
  using namespace rclab;
  const auto choice = cg::ryan_foster_select(z, pool);
  if (!choice) return "no pair";
  const cg::Column* ci = nullptr;
  const cg::Column* cj = nullptr;
  for (const auto& c : pool) {
    if (c.id == choice->col_i) ci = &c;
    if (c.id == choice->col_j) cj = &c;
  }
  if (!ci || !cj || z[ci->id].is_integer() || z[cj->id].is_integer()) return "pair is not fractional";
  const bool cut_differ = !cg::allows(choice->differ, ci->members) || !cg::allows(choice->differ, cj->members);
  const bool cut_together = !cg::allows(choice->together, ci->members) || !cg::allows(choice->together, cj->members);
  if (!cut_differ || !cut_together) return "a child keeps both fractional columns";
  if (!partitions) return std::nullopt;
  for (const auto& p : *partitions) {
    bool in_differ = true;
    bool in_together = true;
    for (auto block : p) {
      const auto mem = members_of(block);
      in_differ = in_differ && cg::allows(choice->differ, mem);
      in_together = in_together && cg::allows(choice->together, mem);
    }
    if (in_differ == in_together) return "partition admitted by " + std::string(in_differ ? "both children" : "no child");
  }
  return std::nullopt;
}

struct RfCheck {
  int fractional = 0;
  int failures = 0;
  std::string first_failure;
};

/// Draws random restricted set covering masters over the separable subsets of
/// Y (all singletons kept, random costs), solves them exactly and runs
/// check_choice with all separable partitions on every fractional optimum.
inline void check_ryan_foster(const rclab::sep::Oracle& oracle, const rclab::geometry::PointSet& y, int wanted,
                              std::mt19937& rng, RfCheck& out, int max_tries = 400) {
  using namespace rclab;
  const int ny = static_cast<int>(y.size());
  const auto subsets = sep::separable_subsets(oracle, y);
  const std::set<std::uint32_t> separable(subsets.begin(), subsets.end());
  const auto partitions = separable_partitions(ny, separable);
  auto fail = [&](const std::string& why) {
    if (out.failures++ == 0) out.first_failure = why;
  };
  for (int tries = 0; tries < max_tries && wanted > 0; ++tries) {
    std::vector<cg::Column> pool;
    for (auto mask : subsets) {
      if (std::popcount(mask) > 1 && rng() % 3 == 0) continue;
      cg::Column c;
      c.members = members_of(mask);
      c.id = static_cast<int>(pool.size());
      pool.push_back(std::move(c));
    }
    lp::LinearProgram m;
    for (const auto& c : pool) {
      const Rational cost = tries % 2 == 0 ? Rational(1) : Rational(static_cast<std::int64_t>(4 + rng() % 5), 4);
      m.add_variable(cost, Rational(0), std::nullopt);
    }
    for (int i = 0; i < ny; ++i) {
      std::vector<lp::Term> row;
      for (const auto& c : pool) {
        if (std::binary_search(c.members.begin(), c.members.end(), i)) row.push_back({c.id, Rational(1)});
      }
      m.add_row(row, lp::RowType::kGreaterEqual, Rational(1));
    }
    const auto sol = lp::solve(m);
    if (sol.status != lp::LpStatus::kOptimal) {
      fail("master not optimal");
      continue;
    }
    const bool fractional =
        std::any_of(sol.primal.begin(), sol.primal.end(), [](const Rational& v) { return !v.is_integer(); });
    if (!fractional) continue;
    ++out.fractional;
    --wanted;
    if (auto why = check_choice(sol.primal, pool, &partitions)) fail(*why);
  }
}

}  // namespace testsupport
