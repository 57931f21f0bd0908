#include <algorithm>
#include <stdexcept>

#include "rclab/exactlp.hpp"

namespace rclab::lp {
namespace {

// Consecutive degenerate pivots tolerated before switching to Bland's rule.
constexpr int kDegenerateLimit = 40;

std::vector<std::pair<int, Rational>> merged_terms(std::span<const Term> terms, bool negate) {
  std::vector<std::pair<int, Rational>> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.emplace_back(t.var, negate ? -t.coef : t.coef);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<int, Rational>> merged;
  for (auto& e : out) {
    if (!merged.empty() && merged.back().first == e.first) {
      merged.back().second += e.second;
    } else {
      merged.push_back(std::move(e));
    }
  }
  std::erase_if(merged, [](const auto& e) { return e.second.is_zero(); });
  return merged;
}

}  // namespace

Rational Row::activity(std::span<const Rational> x) const {
  Rational s = 0;
  for (const auto& t : terms) {
    if (!x[t.var].is_zero()) s += t.coef * x[t.var];
  }
  return s;
}

int LinearProgram::add_variable(Rational cost, std::optional<Rational> lo, std::optional<Rational> hi) {
  objective.push_back(std::move(cost));
  lower.push_back(std::move(lo));
  upper.push_back(std::move(hi));
  return num_vars++;
}

int LinearProgram::add_row(std::vector<Term> terms, RowType type, Rational rhs) {
  for (const auto& t : terms) {
    if (t.var < 0 || t.var >= num_vars) throw std::out_of_range("LinearProgram::add_row: bad variable index");
  }
  rows.push_back(Row{std::move(terms), type, std::move(rhs)});
  return static_cast<int>(rows.size()) - 1;
}

int LinearProgram::add_dense_row(std::span<const Rational> coefs, RowType type, Rational rhs) {
  std::vector<Term> terms;
  for (std::size_t j = 0; j < coefs.size(); ++j) {
    if (!coefs[j].is_zero()) terms.push_back({static_cast<int>(j), coefs[j]});
  }
  return add_row(std::move(terms), type, std::move(rhs));
}

// ---------------------------------------------------------------------------

Simplex::Simplex(const LinearProgram& lp) : maximize_(lp.sense == Sense::kMaximize) {
  if (static_cast<int>(lp.objective.size()) != lp.num_vars || static_cast<int>(lp.lower.size()) != lp.num_vars ||
      static_cast<int>(lp.upper.size()) != lp.num_vars) {
    throw std::invalid_argument("Simplex: inconsistent LinearProgram vector lengths");
  }
  for (int j = 0; j < lp.num_vars; ++j) {
    Column c;
    c.lo = lp.lower[j];
    c.hi = lp.upper[j];
    c.cost = maximize_ ? -lp.objective[j] : lp.objective[j];
    struct_col_.push_back(static_cast<int>(cols_.size()));
    cols_.push_back(std::move(c));
  }
  acol_.resize(cols_.size());
  d_.resize(cols_.size());
  for (std::size_t j = 0; j < cols_.size(); ++j) d_[j] = cols_[j].cost;
  for (const auto& row : lp.rows) add_row(row);
}

const std::optional<Rational>& Simplex::lower(int var) const { return cols_[struct_col_[var]].lo; }
const std::optional<Rational>& Simplex::upper(int var) const { return cols_[struct_col_[var]].hi; }

void Simplex::set_bounds(int var, std::optional<Rational> lo, std::optional<Rational> hi) {
  auto& c = cols_[struct_col_[var]];
  c.lo = std::move(lo);
  c.hi = std::move(hi);
}

void Simplex::set_cost(int var, Rational cost) {
  const int col = struct_col_[var];
  Rational internal = maximize_ ? -cost : cost;
  const Rational delta = internal - cols_[col].cost;
  cols_[col].cost = std::move(internal);
  if (delta.is_zero()) return;
  if (cols_[col].status != Status::kBasic) {
    d_[col] += delta;
  } else {
    recompute_reduced_costs();
  }
}

const Rational* Simplex::entry(const SparseRow& row, int col) {
  auto it = std::lower_bound(row.begin(), row.end(), col, [](const auto& e, int c) { return e.first < c; });
  if (it == row.end() || it->first != col) return nullptr;
  return &it->second;
}

int Simplex::add_row(const Row& row) {
  Column logical;
  switch (row.type) {
    case RowType::kLessEqual:
      logical.hi = row.rhs;
      break;
    case RowType::kGreaterEqual:
      logical.lo = row.rhs;
      break;
    case RowType::kEqual:
      logical.lo = row.rhs;
      logical.hi = row.rhs;
      break;
  }
  std::vector<Term> terms;
  terms.reserve(row.terms.size());
  for (const auto& t : row.terms) {
    if (t.var < 0 || t.var >= num_vars()) throw std::out_of_range("Simplex::add_row: bad variable index");
    terms.push_back({struct_col_[t.var], t.coef});
  }
  const int lcol = static_cast<int>(cols_.size());
  const int r = num_rows();
  logical.status = Status::kBasic;
  logical.row = r;
  cols_.push_back(std::move(logical));
  d_.emplace_back(0);
  acol_.emplace_back();
  logical_col_.push_back(lcol);

  arow_.push_back(merged_terms(terms, false));
  Rational a = 0;
  for (const auto& [col, coef] : arow_.back()) {
    acol_[col].emplace_back(r, coef);
    const Rational v = current_value(col);
    if (!v.is_zero()) a += coef * v;
  }
  act_.push_back(std::move(a));
  status_ = LpStatus::kIterationLimit;
  return r;
}

void Simplex::rebuild_columns() {
  for (auto& c : acol_) c.clear();
  for (int r = 0; r < num_rows(); ++r) {
    for (const auto& [col, coef] : arow_[r]) acol_[col].emplace_back(r, coef);
  }
}

void Simplex::remove_rows(std::vector<int> rows) {
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  // Make every logical to be removed basic first.
  for (int r : rows) {
    const int lcol = logical_col_[r];
    if (cols_[lcol].status == Status::kBasic) continue;
    int best = -1;
    for (int p = 0; p < static_cast<int>(tab_.size()); ++p) {
      if (entry(tab_[p], lcol) != nullptr) {
        best = p;
        break;
      }
    }
    if (best < 0) throw std::logic_error("Simplex::remove_rows: singular basis");
    const int leaving = basic_[best];
    const SparseRow prow = tab_[best];
    pivot(leaving, lcol, prow);
    cols_[leaving].status = Status::kAtLower;
    place_nonbasic(leaving);
  }
  std::vector<int> logical;
  std::vector<SparseRow> arow;
  std::vector<Rational> act;
  std::size_t k = 0;
  for (int i = 0; i < num_rows(); ++i) {
    const int lcol = logical_col_[i];
    if (k < rows.size() && rows[k] == i) {
      ++k;
      cols_[lcol].status = Status::kDead;
      cols_[lcol].row = -2;
      d_[lcol] = 0;
      continue;
    }
    cols_[lcol].row = static_cast<int>(logical.size());
    logical.push_back(lcol);
    arow.push_back(std::move(arow_[i]));
    act.push_back(std::move(act_[i]));
  }
  logical_col_ = std::move(logical);
  arow_ = std::move(arow);
  act_ = std::move(act);
  rebuild_columns();
  recompute_basic_values();
  status_ = LpStatus::kIterationLimit;
}

int Simplex::add_column(Rational cost, std::optional<Rational> lo, std::optional<Rational> hi,
                        std::span<const Term> entries) {
  Column c;
  c.lo = std::move(lo);
  c.hi = std::move(hi);
  c.cost = maximize_ ? -cost : cost;
  c.status = Status::kAtLower;
  const int col = static_cast<int>(cols_.size());
  Rational dj = c.cost;
  cols_.push_back(std::move(c));
  d_.emplace_back(0);
  acol_.emplace_back();
  struct_col_.push_back(col);
  place_nonbasic(col);

  const auto merged = merged_terms(entries, false);
  for (const auto& [r, coef] : merged) {
    if (r < 0 || r >= num_rows()) throw std::out_of_range("Simplex::add_column: bad row index");
    arow_[r].emplace_back(col, coef);  // col is the largest id, order preserved
    acol_[col].emplace_back(r, coef);
  }
  // Stored row entry: -Σ_i β_i a_i over nonbasic logicals, β_i the row's coefficient on s_i.
  for (int p = 0; p < static_cast<int>(tab_.size()); ++p) {
    Rational alpha = 0;
    for (const auto& [r, coef] : merged) {
      const int lcol = logical_col_[r];
      if (cols_[lcol].status == Status::kBasic) continue;
      if (const Rational* b = entry(tab_[p], lcol)) alpha.sub_mul(*b, coef);
    }
    if (alpha.is_zero()) continue;
    const Rational& cb = cols_[basic_[p]].cost;
    if (!cb.is_zero()) dj.sub_mul(cb, alpha);
    tab_[p].emplace_back(col, std::move(alpha));
  }
  d_[col] = std::move(dj);
  status_ = LpStatus::kIterationLimit;
  return num_vars() - 1;
}

Rational Simplex::nonbasic_value(int col) const {
  const auto& c = cols_[col];
  switch (c.status) {
    case Status::kAtLower:
      return c.lo ? *c.lo : Rational(0);
    case Status::kAtUpper:
      return c.hi ? *c.hi : Rational(0);
    default:
      return Rational(0);
  }
}

Rational Simplex::current_value(int col) const {
  const auto& c = cols_[col];
  if (c.status != Status::kBasic) return nonbasic_value(col);
  return c.row >= 0 ? act_[c.row] : xb_[c.position];
}

Simplex::SparseRow Simplex::logical_row(int row) const {
  // s_i = Σ a_j x_j with basic x_j = -Σ α x_N, so the row s_i + Σ β x_N = 0 has
  // β = -a on nonbasic structurals and Σ a_j α_j elsewhere.
  std::vector<std::pair<int, Rational>> parts;
  for (const auto& [col, a] : arow_[row]) {
    const auto& c = cols_[col];
    if (c.status != Status::kBasic) {
      parts.emplace_back(col, -a);
      continue;
    }
    for (const auto& [k, alpha] : tab_[c.position]) parts.emplace_back(k, a * alpha);
  }
  std::sort(parts.begin(), parts.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  SparseRow out;
  for (auto& e : parts) {
    if (!out.empty() && out.back().first == e.first) {
      out.back().second += e.second;
    } else {
      if (!out.empty() && out.back().second.is_zero()) out.pop_back();
      out.push_back(std::move(e));
    }
  }
  if (!out.empty() && out.back().second.is_zero()) out.pop_back();
  return out;
}

Simplex::SparseRow Simplex::tableau_row(int col) const {
  const auto& c = cols_[col];
  return c.row >= 0 ? logical_row(c.row) : tab_[c.position];
}

void Simplex::shift_activity(int col, const Rational& delta) {
  if (delta.is_zero()) return;
  for (const auto& [r, a] : acol_[col]) act_[r].sub_mul(a, -delta);
}

void Simplex::place_nonbasic(int col) {
  auto& c = cols_[col];
  if (c.status == Status::kBasic || c.status == Status::kDead) return;
  if (c.lo && c.hi) {
    const int s = d_[col].sign();
    if (s > 0) {
      c.status = Status::kAtLower;
    } else if (s < 0) {
      c.status = Status::kAtUpper;
    } else if (c.status != Status::kAtUpper) {
      c.status = Status::kAtLower;
    }
  } else if (c.lo) {
    c.status = Status::kAtLower;
  } else if (c.hi) {
    c.status = Status::kAtUpper;
  } else {
    c.status = Status::kZero;
  }
}

void Simplex::recompute_basic_values() {
  for (std::size_t p = 0; p < tab_.size(); ++p) {
    Rational x = 0;
    for (const auto& [col, alpha] : tab_[p]) {
      const Rational v = nonbasic_value(col);
      if (!v.is_zero()) x.sub_mul(alpha, v);
    }
    xb_[p] = std::move(x);
  }
  for (int r = 0; r < num_rows(); ++r) {
    Rational a = 0;
    for (const auto& [col, coef] : arow_[r]) {
      const auto& c = cols_[col];
      const Rational v = c.status == Status::kBasic ? xb_[c.position] : nonbasic_value(col);
      if (!v.is_zero()) a += coef * v;
    }
    act_[r] = std::move(a);
  }
}

void Simplex::recompute_reduced_costs() {
  for (std::size_t j = 0; j < cols_.size(); ++j) {
    d_[j] = (cols_[j].status == Status::kBasic || cols_[j].status == Status::kDead) ? Rational(0) : cols_[j].cost;
  }
  for (std::size_t p = 0; p < tab_.size(); ++p) {
    const Rational& cb = cols_[basic_[p]].cost;
    if (cb.is_zero()) continue;
    for (const auto& [col, alpha] : tab_[p]) d_[col].sub_mul(cb, alpha);
  }
  for (int r = 0; r < num_rows(); ++r) {
    const auto& c = cols_[logical_col_[r]];
    if (c.status != Status::kBasic || c.cost.is_zero()) continue;
    for (const auto& [col, beta] : logical_row(r)) d_[col].sub_mul(c.cost, beta);
  }
}

bool Simplex::dual_feasible(int col) const {
  const auto& c = cols_[col];
  if (c.lo && c.hi && *c.lo == *c.hi) return true;
  switch (c.status) {
    case Status::kAtLower:
      return d_[col].sign() >= 0;
    case Status::kAtUpper:
      return d_[col].sign() <= 0;
    case Status::kZero:
      return d_[col].is_zero();
    default:
      return true;
  }
}

bool Simplex::primal_feasible() const {
  auto ok = [](const Column& c, const Rational& v) { return !(c.lo && v < *c.lo) && !(c.hi && v > *c.hi); };
  for (std::size_t p = 0; p < tab_.size(); ++p) {
    if (!ok(cols_[basic_[p]], xb_[p])) return false;
  }
  for (int r = 0; r < num_rows(); ++r) {
    const auto& c = cols_[logical_col_[r]];
    if (c.status == Status::kBasic && !ok(c, act_[r])) return false;
  }
  return true;
}

void Simplex::pivot(int leaving, int entering, const SparseRow& prow) {
  ++pivots_;
  const Rational* pe = entry(prow, entering);
  if (pe == nullptr) throw std::logic_error("Simplex::pivot: zero pivot element");
  const Rational inv = Rational(1) / *pe;

  SparseRow nrow;
  nrow.reserve(prow.size());
  bool inserted = false;
  for (const auto& [col, v] : prow) {
    if (!inserted && col > leaving) {
      nrow.emplace_back(leaving, inv);
      inserted = true;
    }
    if (col == entering) continue;
    nrow.emplace_back(col, v * inv);
  }
  if (!inserted) nrow.emplace_back(leaving, inv);

  const int skip = is_logical(leaving) ? -1 : cols_[leaving].position;
  SparseRow merged;
  for (int r = 0; r < static_cast<int>(tab_.size()); ++r) {
    if (r == skip) continue;
    SparseRow& row = tab_[r];
    auto it = std::lower_bound(row.begin(), row.end(), entering, [](const auto& e, int c) { return e.first < c; });
    if (it == row.end() || it->first != entering) continue;
    const Rational f = std::move(it->second);
    row.erase(it);
    merged.clear();
    merged.reserve(row.size() + nrow.size());
    std::size_t i = 0;
    std::size_t k = 0;
    while (i < row.size() || k < nrow.size()) {
      if (k == nrow.size() || (i < row.size() && row[i].first < nrow[k].first)) {
        merged.push_back(std::move(row[i++]));
      } else if (i == row.size() || nrow[k].first < row[i].first) {
        merged.emplace_back(nrow[k].first, -(f * nrow[k].second));
        ++k;
      } else {
        Rational v = std::move(row[i].second);
        v.sub_mul(f, nrow[k].second);
        if (!v.is_zero()) merged.emplace_back(row[i].first, std::move(v));
        ++i;
        ++k;
      }
    }
    row.swap(merged);
  }

  if (!d_[entering].is_zero()) {
    const Rational f = d_[entering];
    for (const auto& [col, v] : nrow) d_[col].sub_mul(f, v);
  }
  d_[entering] = 0;

  if (skip >= 0) {
    if (!is_logical(entering)) {
      tab_[skip] = std::move(nrow);
      basic_[skip] = entering;
      cols_[entering].position = skip;
    } else {
      const int last = static_cast<int>(tab_.size()) - 1;
      if (skip != last) {
        tab_[skip] = std::move(tab_[last]);
        basic_[skip] = basic_[last];
        xb_[skip] = std::move(xb_[last]);
        cols_[basic_[skip]].position = skip;
      }
      tab_.pop_back();
      basic_.pop_back();
      xb_.pop_back();
    }
  } else if (!is_logical(entering)) {
    cols_[entering].position = static_cast<int>(tab_.size());
    tab_.push_back(std::move(nrow));
    basic_.push_back(entering);
    xb_.emplace_back(0);
  }
  cols_[entering].status = Status::kBasic;
  if (is_logical(entering)) cols_[entering].position = -1;
  cols_[leaving].position = -1;
  if (cols_[leaving].status == Status::kBasic) cols_[leaving].status = Status::kAtLower;
}

void Simplex::build_farkas(int leaving, const SparseRow& prow) {
  farkas_.assign(logical_col_.size(), Rational(0));
  for (int i = 0; i < num_rows(); ++i) {
    const int lcol = logical_col_[i];
    if (lcol == leaving) {
      farkas_[i] = -1;
    } else if (cols_[lcol].status != Status::kBasic) {
      if (const Rational* e = entry(prow, lcol)) farkas_[i] = -*e;
    }
  }
}

LpStatus Simplex::dual_simplex(std::int64_t max_pivots) {
  int degenerate = 0;
  for (std::int64_t it = 0; it < max_pivots; ++it) {
    const bool bland = degenerate > kDegenerateLimit;
    int leaving = -1;
    Rational worst = 0;
    auto consider = [&](int col, const Rational& v) {
      const auto& c = cols_[col];
      Rational infeas;
      if (c.lo && v < *c.lo) {
        infeas = *c.lo - v;
      } else if (c.hi && v > *c.hi) {
        infeas = v - *c.hi;
      } else {
        return;
      }
      if (bland) {
        if (leaving < 0 || col < leaving) leaving = col;
      } else if (leaving < 0 || infeas > worst) {
        leaving = col;
        worst = std::move(infeas);
      }
    };
    for (std::size_t p = 0; p < tab_.size(); ++p) consider(basic_[p], xb_[p]);
    for (int r = 0; r < num_rows(); ++r) {
      if (cols_[logical_col_[r]].status == Status::kBasic) consider(logical_col_[r], act_[r]);
    }
    if (leaving < 0) return LpStatus::kOptimal;

    const SparseRow prow = tableau_row(leaving);
    const auto& lc = cols_[leaving];
    const Rational xl = current_value(leaving);
    const bool below = lc.lo && xl < *lc.lo;

    int q = -1;
    Rational best_ratio;
    for (const auto& [col, alpha] : prow) {
      const auto& c = cols_[col];
      if (c.lo && c.hi && *c.lo == *c.hi) continue;
      const int s = alpha.sign();
      bool eligible = false;
      switch (c.status) {
        case Status::kAtLower:
          eligible = below ? s < 0 : s > 0;
          break;
        case Status::kAtUpper:
          eligible = below ? s > 0 : s < 0;
          break;
        case Status::kZero:
          eligible = s != 0;
          break;
        default:
          break;
      }
      if (!eligible) continue;
      Rational ratio = d_[col].abs() / alpha.abs();
      if (q < 0 || ratio < best_ratio) {
        q = col;
        best_ratio = std::move(ratio);
      }
    }
    if (q < 0) {
      build_farkas(leaving, prow);
      return LpStatus::kInfeasible;
    }
    if (best_ratio.is_zero()) {
      ++degenerate;
    } else {
      degenerate = 0;
    }

    const Rational target = below ? *lc.lo : *lc.hi;
    const Rational dq = (xl - target) / *entry(prow, q);  // Δx_q = -Δx_l / α_lq
    const Rational xq = nonbasic_value(q) + dq;
    if (!dq.is_zero()) {
      if (!is_logical(q)) shift_activity(q, dq);
      for (std::size_t r = 0; r < tab_.size(); ++r) {
        const Rational* e = entry(tab_[r], q);
        if (!e) continue;
        const Rational delta = -(*e * dq);
        xb_[r] += delta;
        shift_activity(basic_[r], delta);
      }
    }
    pivot(leaving, q, prow);
    cols_[leaving].status = below ? Status::kAtLower : Status::kAtUpper;
    if (!is_logical(q)) xb_[cols_[q].position] = xq;
  }
  return LpStatus::kIterationLimit;
}

LpStatus Simplex::primal_simplex(std::int64_t max_pivots) {
  int degenerate = 0;
  std::vector<Rational> beta(num_rows());
  std::vector<char> touched(num_rows(), 0);
  for (std::int64_t it = 0; it < max_pivots; ++it) {
    const bool bland = degenerate > kDegenerateLimit;
    int q = -1;
    int dir = 0;
    Rational best = 0;
    for (int col = 0; col < static_cast<int>(cols_.size()); ++col) {
      const auto& c = cols_[col];
      if (c.status == Status::kBasic || c.status == Status::kDead) continue;
      if (c.lo && c.hi && *c.lo == *c.hi) continue;
      const int s = d_[col].sign();
      int cdir = 0;
      if (c.status == Status::kAtLower && s < 0) cdir = 1;
      if (c.status == Status::kAtUpper && s > 0) cdir = -1;
      if (c.status == Status::kZero && s != 0) cdir = s < 0 ? 1 : -1;
      if (cdir == 0) continue;
      if (bland) {
        q = col;
        dir = cdir;
        break;
      }
      Rational score = d_[col].abs();
      if (q < 0 || score > best) {
        q = col;
        dir = cdir;
        best = std::move(score);
      }
    }
    if (q < 0) return LpStatus::kOptimal;

    // Column of q: stored rows directly, basic logicals through a_i.
    std::vector<std::pair<int, Rational>> column;  // (basic column, rate of change per unit step)
    std::vector<int> rows_hit;
    auto touch = [&](int r, const Rational& v) {
      if (!touched[r]) {
        touched[r] = 1;
        beta[r] = 0;
        rows_hit.push_back(r);
      }
      beta[r] += v;
    };
    if (!is_logical(q)) {
      for (const auto& [r, a] : acol_[q]) touch(r, -a);
    }
    for (int p = 0; p < static_cast<int>(tab_.size()); ++p) {
      const Rational* e = entry(tab_[p], q);
      if (e == nullptr) continue;
      column.emplace_back(basic_[p], dir > 0 ? -*e : *e);
      for (const auto& [r, a] : acol_[basic_[p]]) touch(r, a * *e);
    }
    for (int r : rows_hit) {
      touched[r] = 0;
      const int lcol = logical_col_[r];
      if (cols_[lcol].status != Status::kBasic || beta[r].is_zero()) continue;
      column.emplace_back(lcol, dir > 0 ? -beta[r] : beta[r]);
    }

    const auto& qc = cols_[q];
    std::optional<Rational> tmax;
    if (qc.lo && qc.hi) tmax = *qc.hi - *qc.lo;
    int leave = -1;
    bool leave_to_lower = false;
    for (const auto& [bcol, rate] : column) {
      const auto& bc = cols_[bcol];
      const Rational v = current_value(bcol);
      std::optional<Rational> lim;
      bool to_lower = false;
      if (rate.sign() < 0 && bc.lo) {
        lim = (v - *bc.lo) / (-rate);
        to_lower = true;
      } else if (rate.sign() > 0 && bc.hi) {
        lim = (*bc.hi - v) / rate;
      }
      if (!lim) continue;
      if (lim->sign() < 0) lim = Rational(0);
      const bool better = !tmax || *lim < *tmax || (*lim == *tmax && leave >= 0 && bcol < leave);
      if (better) {
        tmax = std::move(lim);
        leave = bcol;
        leave_to_lower = to_lower;
      }
    }
    if (!tmax) {
      ray_.assign(struct_col_.size(), Rational(0));
      std::vector<Rational> dircol(cols_.size(), Rational(0));
      dircol[q] = dir;
      for (const auto& [bcol, rate] : column) dircol[bcol] = rate;
      for (std::size_t k = 0; k < struct_col_.size(); ++k) ray_[k] = dircol[struct_col_[k]];
      return LpStatus::kUnbounded;
    }
    const Rational t = *tmax;
    if (t.is_zero()) {
      ++degenerate;
    } else {
      degenerate = 0;
    }
    if (!t.is_zero()) {
      if (!is_logical(q)) shift_activity(q, dir > 0 ? t : -t);
      for (const auto& [bcol, rate] : column) {
        if (is_logical(bcol)) continue;
        const Rational delta = rate * t;
        xb_[cols_[bcol].position] += delta;
        shift_activity(bcol, delta);
      }
    }
    if (leave < 0) {
      cols_[q].status = cols_[q].status == Status::kAtLower ? Status::kAtUpper : Status::kAtLower;
      continue;
    }
    const Rational xq = nonbasic_value(q) + (dir > 0 ? t : -t);
    const SparseRow prow = tableau_row(leave);
    pivot(leave, q, prow);
    cols_[leave].status = leave_to_lower ? Status::kAtLower : Status::kAtUpper;
    if (!is_logical(q)) xb_[cols_[q].position] = xq;
  }
  return LpStatus::kIterationLimit;
}

LpStatus Simplex::solve(std::int64_t max_pivots) {
  farkas_.clear();
  ray_.clear();
  for (std::size_t j = 0; j < cols_.size(); ++j) {
    const auto& c = cols_[j];
    if (c.lo && c.hi && *c.hi < *c.lo) {
      // Empty variable domain: certificate is the bound pair itself (no rows needed).
      farkas_.assign(logical_col_.size(), Rational(0));
      status_ = LpStatus::kInfeasible;
      return status_;
    }
  }
  // Keep statuses that are still valid for the current bounds.
  for (std::size_t j = 0; j < cols_.size(); ++j) {
    auto& c = cols_[j];
    if (c.status == Status::kAtLower && !c.lo) place_nonbasic(static_cast<int>(j));
    if (c.status == Status::kAtUpper && !c.hi) place_nonbasic(static_cast<int>(j));
    if (c.status == Status::kZero && (c.lo || c.hi)) place_nonbasic(static_cast<int>(j));
  }
  recompute_basic_values();

  if (primal_feasible()) {
    status_ = primal_simplex(max_pivots);
    return status_;
  }

  for (std::size_t j = 0; j < cols_.size(); ++j) place_nonbasic(static_cast<int>(j));
  recompute_basic_values();
  bool dual_ok = true;
  for (std::size_t j = 0; j < cols_.size() && dual_ok; ++j) dual_ok = dual_feasible(static_cast<int>(j));
  if (dual_ok) {
    status_ = dual_simplex(max_pivots);
    return status_;
  }

  // Neither: shift costs of dual-infeasible nonbasics to zero reduced cost,
  // reach primal feasibility with the dual simplex, then restore and finish.
  std::vector<Rational> saved(cols_.size());
  for (std::size_t j = 0; j < cols_.size(); ++j) {
    saved[j] = cols_[j].cost;
    if (!dual_feasible(static_cast<int>(j))) {
      cols_[j].cost -= d_[j];
      d_[j] = 0;
    }
  }
  status_ = dual_simplex(max_pivots);
  for (std::size_t j = 0; j < cols_.size(); ++j) cols_[j].cost = saved[j];
  recompute_reduced_costs();
  if (status_ != LpStatus::kOptimal) return status_;
  status_ = primal_simplex(max_pivots);
  return status_;
}

Rational Simplex::value(int var) const { return current_value(struct_col_[var]); }

std::vector<Rational> Simplex::primal() const {
  std::vector<Rational> x(struct_col_.size());
  for (std::size_t k = 0; k < struct_col_.size(); ++k) x[k] = value(static_cast<int>(k));
  return x;
}

Rational Simplex::objective() const {
  Rational z = 0;
  for (std::size_t k = 0; k < struct_col_.size(); ++k) {
    const auto& c = cols_[struct_col_[k]];
    if (c.cost.is_zero()) continue;
    const Rational v = value(static_cast<int>(k));
    if (!v.is_zero()) z += c.cost * v;
  }
  return maximize_ ? -z : z;
}

std::vector<Rational> Simplex::row_duals() const {
  std::vector<Rational> y(logical_col_.size());
  for (std::size_t i = 0; i < logical_col_.size(); ++i) {
    const Rational& v = d_[logical_col_[i]];
    y[i] = maximize_ ? -v : v;
  }
  return y;
}

std::vector<Rational> Simplex::reduced_costs() const {
  std::vector<Rational> d(struct_col_.size());
  for (std::size_t k = 0; k < struct_col_.size(); ++k) {
    const Rational& v = d_[struct_col_[k]];
    d[k] = maximize_ ? -v : v;
  }
  return d;
}

std::vector<Rational> Simplex::row_activities() const { return act_; }

// ---------------------------------------------------------------------------

LpSolution solve(const LinearProgram& lp) {
  Simplex simplex(lp);
  LpSolution sol;
  sol.status = simplex.solve();
  sol.pivots = simplex.pivots();
  switch (sol.status) {
    case LpStatus::kOptimal:
      sol.primal = simplex.primal();
      sol.duals = simplex.row_duals();
      sol.reduced_costs = simplex.reduced_costs();
      sol.objective_value = simplex.objective();
      break;
    case LpStatus::kInfeasible:
      sol.duals = simplex.farkas();
      break;
    case LpStatus::kUnbounded:
      sol.primal = simplex.primal();
      sol.ray = simplex.ray();
      break;
    case LpStatus::kIterationLimit:
      break;
  }
  return sol;
}

namespace {

struct Interval {
  std::optional<Rational> lo;
  std::optional<Rational> hi;
  bool lo_inf = false;
  bool hi_inf = false;
};

// Adds coef·[lo, hi] to the running interval [acc_lo, acc_hi].
void accumulate(Interval& acc, const Rational& coef, const std::optional<Rational>& lo,
                const std::optional<Rational>& hi) {
  if (coef.is_zero()) return;
  const auto& low_src = coef.sign() > 0 ? lo : hi;
  const auto& high_src = coef.sign() > 0 ? hi : lo;
  if (!low_src) {
    acc.lo_inf = true;
  } else if (!acc.lo_inf) {
    acc.lo = acc.lo.value_or(Rational(0)) + coef * *low_src;
  }
  if (!high_src) {
    acc.hi_inf = true;
  } else if (!acc.hi_inf) {
    acc.hi = acc.hi.value_or(Rational(0)) + coef * *high_src;
  }
}

std::pair<std::optional<Rational>, std::optional<Rational>> row_bounds(const Row& row) {
  switch (row.type) {
    case RowType::kLessEqual:
      return {std::nullopt, row.rhs};
    case RowType::kGreaterEqual:
      return {row.rhs, std::nullopt};
    case RowType::kEqual:
      return {row.rhs, row.rhs};
  }
  return {};
}

}  // namespace

bool check_farkas(const LinearProgram& lp, std::span<const Rational> multipliers) {
  if (multipliers.size() != lp.rows.size()) return false;
  std::vector<Rational> g(lp.num_vars, Rational(0));
  Interval acc;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const Rational& y = multipliers[i];
    if (y.is_zero()) continue;
    for (const auto& t : lp.rows[i].terms) g[t.var] += y * t.coef;
    const auto [lo, hi] = row_bounds(lp.rows[i]);
    accumulate(acc, -y, lo, hi);
  }
  for (int j = 0; j < lp.num_vars; ++j) accumulate(acc, g[j], lp.lower[j], lp.upper[j]);
  const Rational zero = 0;
  if (!acc.hi_inf && acc.hi.value_or(zero) < zero) return true;
  if (!acc.lo_inf && acc.lo.value_or(zero) > zero) return true;
  return false;
}

std::string check_optimality(const LinearProgram& lp, const LpSolution& sol) {
  if (sol.status != LpStatus::kOptimal) return "status is not optimal";
  const int n = lp.num_vars;
  if (static_cast<int>(sol.primal.size()) != n) return "primal length mismatch";
  if (sol.duals.size() != lp.rows.size()) return "dual length mismatch";
  const bool maxi = lp.sense == Sense::kMaximize;
  auto internal = [&](const Rational& v) { return maxi ? -v : v; };

  for (int j = 0; j < n; ++j) {
    if (lp.lower[j] && sol.primal[j] < *lp.lower[j]) return "variable below lower bound";
    if (lp.upper[j] && sol.primal[j] > *lp.upper[j]) return "variable above upper bound";
  }
  std::vector<Rational> activity(lp.rows.size());
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    activity[i] = lp.rows[i].activity(sol.primal);
    const auto [lo, hi] = row_bounds(lp.rows[i]);
    if (lo && activity[i] < *lo) return "row " + std::to_string(i) + " violated (below)";
    if (hi && activity[i] > *hi) return "row " + std::to_string(i) + " violated (above)";
  }

  std::vector<Rational> d(n);
  for (int j = 0; j < n; ++j) d[j] = internal(lp.objective[j]);
  Rational dual_obj = 0;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const Rational y = internal(sol.duals[i]);
    if (y.is_zero()) continue;
    const auto [lo, hi] = row_bounds(lp.rows[i]);
    if (y.sign() > 0 && !lo) return "row dual has wrong sign";
    if (y.sign() < 0 && !hi) return "row dual has wrong sign";
    const Rational& bound = y.sign() > 0 ? *lo : *hi;
    if (activity[i] != bound) return "complementary slackness fails on a row";
    dual_obj += y * bound;
    for (const auto& t : lp.rows[i].terms) d[t.var].sub_mul(y, t.coef);
  }
  Rational primal_obj = 0;
  for (int j = 0; j < n; ++j) {
    primal_obj += internal(lp.objective[j]) * sol.primal[j];
    if (d[j].is_zero()) continue;
    const auto& bound = d[j].sign() > 0 ? lp.lower[j] : lp.upper[j];
    if (!bound) return "reduced cost has wrong sign";
    if (sol.primal[j] != *bound) return "complementary slackness fails on a bound";
    dual_obj += d[j] * *bound;
  }
  if (primal_obj != dual_obj) return "primal and dual objectives differ";
  if (internal(sol.objective_value) != primal_obj) return "reported objective differs";
  return {};
}

}  // namespace rclab::lp
