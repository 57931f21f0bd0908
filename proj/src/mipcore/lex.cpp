#include <algorithm>
#include <map>

#include "rclab/mipcore.hpp"

namespace rclab::mip {

LexFixings lex_ge_propagate(std::span<const int> v, std::span<const int> w, std::span<const Rational> lo,
                            std::span<const Rational> hi) {
  LexFixings res;
  std::vector<std::pair<int, int>> assigned;
  auto val = [&](int var) {
    for (const auto& [x, value] : assigned) {
      if (x == var) return value;
    }
    if (lo[var] == hi[var]) return lo[var].is_zero() ? 0 : 1;
    return -1;
  };
  auto set = [&](int var, int value) {
    assigned.emplace_back(var, value);
    res.fixings.emplace_back(var, value);
  };
  // Optimistic completion of the tail: each occurrence takes its best value.
  auto tail_ok = [&](std::size_t from) {
    for (std::size_t j = from; j < v.size(); ++j) {
      if (v[j] == w[j]) continue;
      const int va = val(v[j]);
      const int vb = val(w[j]);
      const int best_a = va < 0 ? 1 : va;
      const int best_b = vb < 0 ? 0 : vb;
      if (best_a > best_b) return true;
      if (best_a < best_b) return false;
    }
    return true;
  };

  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == w[i]) continue;
    const int va = val(v[i]);
    const int vb = val(w[i]);
    if (va >= 0 && vb >= 0) {
      if (va > vb) return res;
      if (va < vb) {
        res.infeasible = true;
        return res;
      }
      continue;
    }
    if (va == 0) {
      set(w[i], 0);
      continue;
    }
    if (vb == 1) {
      set(v[i], 1);
      continue;
    }
    if (!tail_ok(i + 1)) {
      if (va < 0) set(v[i], 1);
      if (vb < 0) set(w[i], 0);
    }
    return res;
  }
  return res;
}

std::optional<lp::Row> lex_ge_cover_cut(std::span<const int> v, std::span<const int> w, std::span<const Rational> x) {
  Rational prefix = 0;
  Rational best_violation = 0;
  int best = -1;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != w[i]) {
      const Rational lhs = prefix + x[v[i]] + 1 - x[w[i]];
      const Rational violation = Rational(1) - lhs;
      if (violation > best_violation) {
        best_violation = violation;
        best = static_cast<int>(i);
      }
    }
    prefix += min(x[v[i]], Rational(1) - x[w[i]]);
    if (prefix >= Rational(1)) break;
  }
  if (best < 0) return std::nullopt;

  std::map<int, Rational> coef;
  Rational rhs = 1;
  for (int j = 0; j < best; ++j) {
    if (x[v[j]] <= Rational(1) - x[w[j]]) {
      coef[v[j]] += 1;
    } else {
      coef[w[j]] -= 1;
      rhs -= 1;
    }
  }
  coef[v[best]] += 1;
  coef[w[best]] -= 1;
  rhs -= 1;
  lp::Row row;
  row.type = lp::RowType::kGreaterEqual;
  row.rhs = rhs;
  for (auto& [var, c] : coef) {
    if (!c.is_zero()) row.terms.push_back({var, c});
  }
  return row;
}

}  // namespace rclab::mip
