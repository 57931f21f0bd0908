#include <algorithm>
#include <numeric>

#include "plugins.hpp"

namespace rclab::models {
namespace detail {

bool SetTester::separable(const std::vector<int>& members) {
  if (members.empty()) return true;
  auto it = cache_.find(members);
  if (it != cache_.end()) return it->second;
  std::vector<Point> pts;
  for (int m : members) pts.push_back(y_[m]);
  const bool ok = oracle_.separable(pts);
  cache_.emplace(members, ok);
  return ok;
}

std::vector<int> SetTester::sparsify(const std::vector<int>& members) {
  std::vector<int> cur;
  for (int m : members) {
    cur.push_back(m);
    std::vector<int> sorted = cur;
    std::sort(sorted.begin(), sorted.end());
    if (!separable(sorted)) break;
  }
  std::sort(cur.begin(), cur.end());
  if (separable(cur)) throw std::invalid_argument("sparsify: set is separable");
  for (std::size_t i = 0; i < cur.size();) {
    std::vector<int> trial = cur;
    trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
    if (!separable(trial)) {
      cur = std::move(trial);
    } else {
      ++i;
    }
  }
  return cur;
}

std::vector<ConflictRow> conflicts_integral(SetTester& t, const std::vector<std::vector<int>>& sets) {
  std::vector<ConflictRow> out;
  std::set<std::vector<int>> seen;
  for (auto f : sets) {
    std::sort(f.begin(), f.end());
    if (t.separable(f)) continue;
    auto c = t.sparsify(f);
    if (seen.insert(c).second) out.push_back({std::move(c)});
  }
  return out;
}

std::vector<ConflictRow> conflicts_fractional(SetTester& t, const std::vector<std::vector<Rational>>& s_star) {
  std::vector<ConflictRow> out;
  std::set<std::vector<int>> seen;
  for (const auto& col : s_star) {
    std::vector<int> order;
    for (int y = 0; y < static_cast<int>(col.size()); ++y) {
      if (col[y].sign() > 0) order.push_back(y);
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return col[a] > col[b]; });
    std::vector<int> f;
    Rational sum = 0;
    for (int y : order) {
      f.push_back(y);
      sum += col[y];
      // Slack |F| - 1 - Σ s* never shrinks as F grows, so stop once the row cannot be violated.
      if (sum <= Rational(static_cast<std::int64_t>(f.size()) - 1)) break;
      std::vector<int> sorted = f;
      std::sort(sorted.begin(), sorted.end());
      if (t.separable(sorted)) continue;
      auto c = t.sparsify(f);
      if (seen.insert(c).second) out.push_back({std::move(c)});
      break;
    }
  }
  return out;
}

std::vector<std::vector<Rational>> s_matrix(const VariableMap& v, std::span<const Rational> x) {
  std::vector<std::vector<Rational>> m(v.k, std::vector<Rational>(v.ny));
  for (int i = 0; i < v.k; ++i) {
    for (int y = 0; y < v.ny; ++y) m[i][y] = x[v.s(y, i)];
  }
  return m;
}

ConflictSeparator::ConflictSeparator(std::shared_ptr<const RcInstance> inst, VariableMap vars, bool fractional)
    : inst_(std::move(inst)), v_(vars), fractional_(fractional), oracle_(inst_->x, inst_->eps),
      tester_(oracle_, inst_->y) {}

int ConflictSeparator::add_rows(mip::Solver& s, const std::vector<ConflictRow>& rows) {
  int added = 0;
  for (const auto& c : rows) {
    if (!pool_.insert(c.members).second) continue;
    for (int i = 0; i < v_.k; ++i) {
      lp::Row row;
      for (int y : c.members) row.terms.push_back({v_.s(y, i), Rational(1)});
      row.type = lp::RowType::kLessEqual;
      row.rhs = Rational(static_cast<std::int64_t>(c.members.size()) - 1);
      s.add_row(std::move(row));
      ++added;
    }
  }
  return added;
}

int ConflictSeparator::separate(mip::Solver& s, std::span<const Rational> x) {
  if (!fractional_) return 0;
  return add_rows(s, conflicts_fractional(tester_, s_matrix(v_, x)));
}

mip::CheckResult ConflictSeparator::check(mip::Solver& s, std::span<const Rational> x) {
  std::vector<std::vector<int>> sets(v_.k);
  for (int i = 0; i < v_.k; ++i) {
    for (int y = 0; y < v_.ny; ++y) {
      if (x[v_.s(y, i)] == Rational(1)) sets[i].push_back(y);
    }
  }
  const auto rows = conflicts_integral(tester_, sets);
  if (rows.empty()) return mip::CheckResult::kFeasible;
  if (add_rows(s, rows) > 0) return mip::CheckResult::kRowsAdded;
  return mip::CheckResult::kInfeasible;
}

int HidingSeparator::separate(mip::Solver& s, std::span<const Rational> x) {
  const auto cuts = violated_hiding_cuts(pairs_, s_matrix(v_, x));
  for (const auto& [p, i] : cuts) {
    lp::Row row;
    row.terms = {{v_.s(pairs_[p].first, i), Rational(1)}, {v_.s(pairs_[p].second, i), Rational(1)}};
    row.type = lp::RowType::kLessEqual;
    row.rhs = 1;
    s.add_row(std::move(row));
  }
  return static_cast<int>(cuts.size());
}

mip::PropStatus ConvexityPropagator::propagate(mip::Solver& s) {
  const int bv = s.branched_var();
  if (bv < 0 || !v_.is_s(bv)) return mip::PropStatus::kUnchanged;
  const int i = v_.s_index(bv).second;
  bool reduced = false;
  while (true) {
    std::vector<int> one, zero, free;
    for (int y = 0; y < v_.ny; ++y) {
      const int var = v_.s(y, i);
      if (s.lower(var) == Rational(1)) {
        one.push_back(y);
      } else if (s.upper(var) == Rational(0)) {
        zero.push_back(y);
      } else {
        free.push_back(y);
      }
    }
    const auto out = convexity_propagate(*inst_, one, zero, free, intersection_);
    if (out.cutoff) return mip::PropStatus::kCutoff;
    for (int y : out.fix_one) {
      if (!s.fix(v_.s(y, i), Rational(1))) return mip::PropStatus::kCutoff;
    }
    for (int y : out.fix_zero) {
      if (!s.fix(v_.s(y, i), Rational(0))) return mip::PropStatus::kCutoff;
    }
    if (!out.fix_one.empty() || !out.fix_zero.empty()) reduced = true;
    if (out.fix_one.empty()) break;
  }
  return reduced ? mip::PropStatus::kReduced : mip::PropStatus::kUnchanged;
}

mip::PropStatus LexPlugin::propagate(mip::Solver& s) {
  std::vector<Rational> lo(s.num_vars()), hi(s.num_vars());
  for (int j = 0; j < s.num_vars(); ++j) {
    lo[j] = s.lower(j);
    hi[j] = s.upper(j);
  }
  bool reduced = false;
  for (const auto& [v, w] : pairs_) {
    const auto f = mip::lex_ge_propagate(v, w, lo, hi);
    if (f.infeasible) return mip::PropStatus::kCutoff;
    for (const auto& [var, val] : f.fixings) {
      if (!s.fix(var, Rational(val))) return mip::PropStatus::kCutoff;
      lo[var] = hi[var] = Rational(val);
      reduced = true;
    }
  }
  return reduced ? mip::PropStatus::kReduced : mip::PropStatus::kUnchanged;
}

int LexPlugin::separate(mip::Solver& s, std::span<const Rational> x) {
  int added = 0;
  for (const auto& [v, w] : pairs_) {
    if (auto row = mip::lex_ge_cover_cut(v, w, x)) {
      s.add_row(std::move(*row));
      ++added;
    }
  }
  return added;
}

}  // namespace detail

std::vector<ConflictRow> separate_conflicts_integral(const sep::Oracle& oracle, const PointSet& y,
                                                     const std::vector<std::vector<int>>& sets) {
  detail::SetTester t(oracle, y);
  return detail::conflicts_integral(t, sets);
}

std::vector<ConflictRow> separate_conflicts_fractional(const sep::Oracle& oracle, const PointSet& y,
                                                       const std::vector<std::vector<Rational>>& s_star) {
  detail::SetTester t(oracle, y);
  return detail::conflicts_fractional(t, s_star);
}

std::vector<std::pair<int, int>> violated_hiding_cuts(const std::vector<std::pair<int, int>>& pairs,
                                                      const std::vector<std::vector<Rational>>& s_star) {
  std::vector<std::pair<int, int>> out;
  for (int p = 0; p < static_cast<int>(pairs.size()); ++p) {
    for (int i = 0; i < static_cast<int>(s_star.size()); ++i) {
      if (s_star[i][pairs[p].first] + s_star[i][pairs[p].second] > Rational(1)) out.emplace_back(p, i);
    }
  }
  return out;
}

ConvexityOutcome convexity_propagate(const RcInstance& inst, const std::vector<int>& fixed_one,
                                     const std::vector<int>& fixed_zero, const std::vector<int>& free,
                                     bool intersection) {
  ConvexityOutcome out;
  std::vector<Point> f;
  for (int y : fixed_one) f.push_back(inst.y[y]);
  if (f.size() >= 2) {
    const auto hull = geometry::convex_hull_facets(inst.dim(), f);
    for (int y : fixed_zero) {
      if (hull.contains(inst.y[y])) {
        out.cutoff = true;
        return out;
      }
    }
    for (int y : free) {
      if (hull.contains(inst.y[y])) out.fix_one.push_back(y);
    }
  }
  if (intersection && !f.empty()) {
    for (int y : free) {
      if (std::find(out.fix_one.begin(), out.fix_one.end(), y) != out.fix_one.end()) continue;
      auto g = f;
      g.push_back(inst.y[y]);
      if (sep::hulls_intersect(g, inst.x.points())) out.fix_zero.push_back(y);
    }
  }
  return out;
}

}  // namespace rclab::models
