#include <algorithm>
#include <set>
#include <stdexcept>

#include "rclab/mipcore.hpp"

namespace rclab::mip {

int Model::add_variable(Rational cost, std::optional<Rational> lo, std::optional<Rational> hi, bool is_integer) {
  integer.push_back(is_integer);
  return lp.add_variable(std::move(cost), std::move(lo), std::move(hi));
}

int most_fractional(std::span<const Rational> x, const std::vector<bool>& integer) {
  int best = -1;
  Rational best_score = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!integer[j] || x[j].is_integer()) continue;
    const Rational f = x[j] - x[j].floor();
    const Rational score = min(f, Rational(1) - f);
    if (best < 0 || score > best_score) {
      best = static_cast<int>(j);
      best_score = score;
    }
  }
  return best;
}

std::optional<std::vector<Child>> MostFractionalBranching::branch(Solver& s, std::span<const Rational> x) {
  const int j = most_fractional(x, s.model().integer);
  if (j < 0 || !s.has_upper(j)) return std::nullopt;
  const Rational up = x[j].ceil();
  const Rational down = x[j].floor();
  std::vector<Child> out(2);
  out[0].bounds.push_back({j, up, s.upper(j)});
  out[0].branch_var = j;
  out[1].bounds.push_back({j, s.lower(j), down});
  out[1].branch_var = j;
  return out;
}

// ---------------------------------------------------------------------------

struct Solver::Node {
  int id = 0;
  int parent = -1;
  int depth = 0;
  Rational bound;
  bool has_bound = false;
  std::vector<BoundChange> bounds;  // differences from the global bounds
  std::vector<std::pair<int, lp::Row>> local_rows;
  std::any payload;
  int branch_var = -1;
};

Solver::Solver(Model model, Options options) : model_(std::move(model)), options_(std::move(options)) {
  const int n = model_.lp.num_vars;
  if (static_cast<int>(model_.integer.size()) != n) throw std::invalid_argument("Solver: integrality flags length");
  maximize_ = model_.lp.sense == lp::Sense::kMaximize;
  for (int j = 0; j < n; ++j) {
    const auto& l = model_.lp.lower[j];
    const auto& u = model_.lp.upper[j];
    if (model_.integer[j] && (!l || *l < Rational(0) || (u && *u > Rational(1)))) {
      throw std::invalid_argument("Solver: integer variables must be binary or nonnegative unbounded");
    }
    global_lo_.push_back(l.value_or(Rational(0)));
    global_hi_.push_back(u.value_or(Rational(0)));
    has_lo_.push_back(l.has_value());
    has_hi_.push_back(u.has_value());
  }
  lo_ = global_lo_;
  hi_ = global_hi_;
}

Solver::~Solver() = default;

void Solver::register_propagator(std::shared_ptr<Propagator> p) { propagators_.push_back(std::move(p)); }
void Solver::register_separator(std::shared_ptr<Separator> p) { separators_.push_back(std::move(p)); }
void Solver::register_pricer(std::shared_ptr<Pricer> p) {
  if (pricer_) throw std::logic_error("Solver: a pricer is already registered");
  pricer_ = std::move(p);
}
void Solver::register_branching(std::shared_ptr<BranchingRule> p) { branching_.push_back(std::move(p)); }

bool Solver::feasible_point(std::span<const Rational> x) const {
  const auto& lp = model_.lp;
  if (static_cast<int>(x.size()) != lp.num_vars) return false;
  for (int j = 0; j < lp.num_vars; ++j) {
    if (lp.lower[j] && x[j] < *lp.lower[j]) return false;
    if (lp.upper[j] && x[j] > *lp.upper[j]) return false;
    if (model_.integer[j] && !x[j].is_integer()) return false;
  }
  for (const auto& row : lp.rows) {
    const Rational a = row.activity(x);
    if (row.type != lp::RowType::kGreaterEqual && a > row.rhs) return false;
    if (row.type != lp::RowType::kLessEqual && a < row.rhs) return false;
  }
  return true;
}

bool Solver::set_incumbent(std::vector<Rational> x) {
  if (!feasible_point(x)) return false;
  Rational value = 0;
  for (int j = 0; j < model_.lp.num_vars; ++j) value += model_.lp.objective[j] * x[j];
  if (incumbent_value_ && !(maximize_ ? value > *incumbent_value_ : value < *incumbent_value_)) return true;
  incumbent_ = std::move(x);
  incumbent_value_ = value;
  return true;
}

bool Solver::tighten(int var, const Rational& lo, const Rational& hi) {
  if (!has_lo_[var] || lo > lo_[var]) {
    lo_[var] = lo;
    has_lo_[var] = true;
  }
  if (!has_hi_[var] || hi < hi_[var]) {
    hi_[var] = hi;
    has_hi_[var] = true;
  }
  return lo_[var] <= hi_[var];
}

void Solver::add_row(lp::Row row, bool global) {
  if (global) {
    model_.lp.rows.push_back(row);
    if (simplex_) {
      simplex_->add_row(row);
      row_map_.push_back(static_cast<int>(model_.lp.rows.size()) - 1);
    }
  } else {
    const int id = next_local_id_++;
    current_local_rows_.emplace_back(id, row);
    if (simplex_) {
      simplex_->add_row(row);
      row_map_.push_back(-(id + 1));
    }
  }
}

int Solver::add_column(Rational cost, Rational lo, std::optional<Rational> hi, std::span<const lp::Term> entries,
                       bool is_integer) {
  const int var = model_.lp.num_vars;
  model_.lp.objective.push_back(cost);
  model_.lp.lower.push_back(lo);
  model_.lp.upper.push_back(hi);
  model_.lp.num_vars++;
  model_.integer.push_back(is_integer);
  for (const auto& t : entries) model_.lp.rows[t.var].terms.push_back({var, t.coef});
  global_lo_.push_back(lo);
  global_hi_.push_back(hi.value_or(Rational(0)));
  lo_.push_back(lo);
  hi_.push_back(hi.value_or(Rational(0)));
  has_lo_.push_back(true);
  has_hi_.push_back(hi.has_value());
  if (!incumbent_.empty()) incumbent_.emplace_back(0);
  if (simplex_) {
    std::vector<lp::Term> mapped;
    for (const auto& t : entries) mapped.push_back({model_to_simplex_[t.var], t.coef});
    simplex_->add_column(cost, lo, hi, mapped);
    lp_x_.emplace_back(0);
  }
  return var;
}

bool Solver::time_up() const {
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
  return elapsed.count() > options_.limits.time_seconds;
}

double Solver::remaining_seconds() const {
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
  return options_.limits.time_seconds - elapsed.count();
}

Rational Solver::round_bound(const Rational& v) const {
  if (!model_.objective_integral) return v;
  return maximize_ ? v.floor() : v.ceil();
}

bool Solver::can_improve(const Rational& bound) const {
  auto beats = [&](const Rational& threshold) { return maximize_ ? bound > threshold : bound < threshold; };
  if (incumbent_value_ && !beats(*incumbent_value_)) return false;
  if (options_.objective_limit && !beats(*options_.objective_limit)) return false;
  return true;
}

// ---------------------------------------------------------------------------

bool Solver::linear_propagation() {
  bool changed = false;
  auto run_row = [&](const lp::Row& row) -> bool {
    // Minimum and maximum activity with counts of infinite contributions.
    Rational minact = 0;
    Rational maxact = 0;
    int min_inf = 0;
    int max_inf = 0;
    for (const auto& t : row.terms) {
      const int j = t.var;
      const bool pos = t.coef.sign() > 0;
      const bool lo_ok = has_lo_[j];
      const bool hi_ok = has_hi_[j];
      if (pos ? lo_ok : hi_ok) {
        minact += t.coef * (pos ? lo_[j] : hi_[j]);
      } else {
        ++min_inf;
      }
      if (pos ? hi_ok : lo_ok) {
        maxact += t.coef * (pos ? hi_[j] : lo_[j]);
      } else {
        ++max_inf;
      }
    }
    const bool check_upper = row.type != lp::RowType::kGreaterEqual;  // activity ≤ rhs
    const bool check_lower = row.type != lp::RowType::kLessEqual;     // activity ≥ rhs
    if (check_upper && min_inf == 0 && minact > row.rhs) return false;
    if (check_lower && max_inf == 0 && maxact < row.rhs) return false;
    for (const auto& t : row.terms) {
      const int j = t.var;
      if (!model_.integer[j] || !has_hi_[j] || lo_[j] == hi_[j]) continue;
      const Rational span = t.coef.abs();  // binary with domain {0, 1}
      if (check_upper && min_inf == 0 && minact + span > row.rhs) {
        // Moving away from the activity-minimizing value overshoots the rhs.
        const Rational value = t.coef.sign() > 0 ? Rational(0) : Rational(1);
        lo_[j] = value;
        hi_[j] = value;
        changed = true;
        continue;
      }
      if (check_lower && max_inf == 0 && maxact - span < row.rhs) {
        const Rational value = t.coef.sign() > 0 ? Rational(1) : Rational(0);
        lo_[j] = value;
        hi_[j] = value;
        changed = true;
      }
    }
    return true;
  };
  for (const auto& row : model_.lp.rows) {
    if (!run_row(row)) return false;
  }
  for (const auto& [id, row] : current_local_rows_) {
    if (!run_row(row)) return false;
  }
  last_propagation_changed_ = changed;
  return true;
}

bool Solver::propagate_node() {
  for (int round = 0; round < options_.propagation_rounds; ++round) {
    bool changed = false;
    // Linear propagation repeats internally until stable (cheap, exact).
    // Rows may still gain columns when a pricer is present.
    for (int inner = 0; inner < 20 && !pricer_; ++inner) {
      if (!linear_propagation()) return false;
      if (!last_propagation_changed_) break;
      changed = true;
    }
    for (const auto& p : propagators_) {
      const auto st = p->propagate(*this);
      if (st == PropStatus::kCutoff) return false;
      if (st == PropStatus::kReduced) changed = true;
    }
    for (int j = 0; j < num_vars(); ++j) {
      if (has_lo_[j] && has_hi_[j] && lo_[j] > hi_[j]) return false;
    }
    if (!changed) break;
  }
  return true;
}

void Solver::sync_bounds() {
  for (int j = 0; j < num_vars(); ++j) {
    const auto& sl = simplex_->lower(j);
    const auto& su = simplex_->upper(j);
    const bool same_lo = has_lo_[j] ? (sl && *sl == lo_[j]) : !sl;
    const bool same_hi = has_hi_[j] ? (su && *su == hi_[j]) : !su;
    if (same_lo && same_hi) continue;
    simplex_->set_bounds(j, has_lo_[j] ? std::optional<Rational>(lo_[j]) : std::nullopt,
                         has_hi_[j] ? std::optional<Rational>(hi_[j]) : std::nullopt);
  }
}

void Solver::activate(const Node& node) {
  lo_ = global_lo_;
  hi_ = global_hi_;
  for (int j = 0; j < num_vars(); ++j) {
    has_lo_[j] = model_.lp.lower[j].has_value();
    has_hi_[j] = model_.lp.upper[j].has_value();
  }
  for (const auto& c : node.bounds) {
    lo_[c.var] = c.lo;
    hi_[c.var] = c.hi;
    has_lo_[c.var] = true;
    has_hi_[c.var] = true;
  }
  current_id_ = node.id;
  current_depth_ = node.depth;
  current_branch_var_ = node.branch_var;
  current_payload_ = node.payload;
  current_local_rows_ = node.local_rows;

  // Bring the simplex rows in line with the node's local rows.
  std::set<int> wanted;
  for (const auto& [id, row] : current_local_rows_) wanted.insert(id);
  std::vector<int> remove;
  std::set<int> present;
  for (int r = 0; r < static_cast<int>(row_map_.size()); ++r) {
    if (row_map_[r] >= 0) continue;
    const int id = -row_map_[r] - 1;
    if (wanted.contains(id)) {
      present.insert(id);
    } else {
      remove.push_back(r);
    }
  }
  if (!remove.empty()) {
    simplex_->remove_rows(remove);
    std::vector<int> kept;
    std::size_t k = 0;
    for (int r = 0; r < static_cast<int>(row_map_.size()); ++r) {
      if (k < remove.size() && remove[k] == r) {
        ++k;
        continue;
      }
      kept.push_back(row_map_[r]);
    }
    row_map_ = std::move(kept);
    rebuild_model_to_simplex();
  }
  for (const auto& [id, row] : current_local_rows_) {
    if (present.contains(id)) continue;
    simplex_->add_row(row);
    row_map_.push_back(-(id + 1));
  }
}

void Solver::rebuild_model_to_simplex() {
  model_to_simplex_.assign(model_.lp.rows.size(), -1);
  for (int r = 0; r < static_cast<int>(row_map_.size()); ++r) {
    if (row_map_[r] >= 0) model_to_simplex_[row_map_[r]] = r;
  }
}

Solver::LpOutcome Solver::solve_lp_with_pricing(Rational& bound) {
  while (true) {
    if (static_cast<int>(model_to_simplex_.size()) != num_rows()) rebuild_model_to_simplex();
    sync_bounds();
    const auto st = simplex_->solve();
    ++lp_count_;
    if (st == lp::LpStatus::kInfeasible) {
      if (pricer_) {
        if (time_up()) return LpOutcome::kIncomplete;
        const auto& f = simplex_->farkas();
        std::vector<Rational> farkas(num_rows(), Rational(0));
        for (int r = 0; r < static_cast<int>(row_map_.size()); ++r) {
          if (row_map_[r] >= 0) farkas[row_map_[r]] = f[r];
        }
        const int added = pricer_->price_infeasible(*this, farkas);
        if (added < 0) return LpOutcome::kIncomplete;
        if (added > 0) continue;
      }
      return LpOutcome::kInfeasible;
    }
    if (st != lp::LpStatus::kOptimal) throw std::runtime_error("Solver: LP relaxation is not bounded");
    lp_x_ = simplex_->primal();
    if (pricer_) {
      if (time_up()) return LpOutcome::kIncomplete;
      const auto y = simplex_->row_duals();
      std::vector<Rational> duals(num_rows(), Rational(0));
      for (int r = 0; r < static_cast<int>(row_map_.size()); ++r) {
        if (row_map_[r] >= 0) duals[row_map_[r]] = y[r];
      }
      const int added = pricer_->price(*this, duals);
      if (added < 0) return LpOutcome::kIncomplete;
      if (added > 0) continue;
    }
    bound = simplex_->objective();
    return LpOutcome::kOptimal;
  }
}

Solver::NodeOutcome Solver::process(Node& node, std::vector<std::unique_ptr<Node>>& children) {
  activate(node);
  if (pricer_) pricer_->activate(*this);
  if (!propagate_node()) return NodeOutcome::kPruned;

  int rounds = 0;
  const int max_rounds = node.depth == 0 ? options_.separation_rounds_root : options_.separation_rounds;
  while (true) {
    if (time_up()) {
      // Out of time: keep the node open with its inherited bound.
      return NodeOutcome::kTimeout;
    }
    Rational lp_value;
    const auto lp_outcome = solve_lp_with_pricing(lp_value);
    if (lp_outcome == LpOutcome::kIncomplete) return NodeOutcome::kTimeout;
    if (lp_outcome == LpOutcome::kInfeasible) return NodeOutcome::kPruned;
    if (node.depth == 0 && !root_lp_) root_lp_ = lp_value;
    const Rational bound = round_bound(lp_value);
    if (!node.has_bound || (maximize_ ? bound < node.bound : bound > node.bound)) {
      node.bound = bound;
      node.has_bound = true;
    }
    if (options_.trace_bounds) trace_.push_back({node.id, node.parent, lp_value});
    if (!can_improve(bound)) return NodeOutcome::kPruned;

    if (rounds < max_rounds) {
      int added = 0;
      for (const auto& sep : separators_) added += sep->separate(*this, lp_x_);
      ++rounds;
      if (added > 0) continue;
    }

    if (most_fractional(lp_x_, model_.integer) < 0) {
      bool rows_added = false;
      bool infeasible = false;
      for (const auto& sep : separators_) {
        const auto verdict = sep->check(*this, lp_x_);
        if (verdict == CheckResult::kRowsAdded) rows_added = true;
        if (verdict == CheckResult::kInfeasible) infeasible = true;
      }
      if (infeasible) return NodeOutcome::kPruned;
      if (rows_added) continue;
      Rational value = 0;
      for (int j = 0; j < num_vars(); ++j) value += model_.lp.objective[j] * lp_x_[j];
      if (!incumbent_value_ || (maximize_ ? value > *incumbent_value_ : value < *incumbent_value_)) {
        incumbent_ = lp_x_;
        incumbent_value_ = value;
        ++solutions_found_;
      }
      return NodeOutcome::kSolution;
    }

    std::optional<std::vector<Child>> kids;
    for (const auto& rule : branching_) {
      kids = rule->branch(*this, lp_x_);
      if (kids) break;
    }
    if (!kids) {
      MostFractionalBranching fallback;
      kids = fallback.branch(*this, lp_x_);
    }
    if (!kids || kids->empty()) throw std::logic_error("Solver: branching produced no children");

    std::vector<BoundChange> base;
    for (int j = 0; j < num_vars(); ++j) {
      const bool lo_diff = has_lo_[j] && (!model_.lp.lower[j] || lo_[j] != global_lo_[j]);
      const bool hi_diff = has_hi_[j] && (!model_.lp.upper[j] || hi_[j] != global_hi_[j]);
      if (lo_diff || hi_diff) {
        if (!has_lo_[j] || !has_hi_[j]) continue;  // only finite boxes are recorded
        base.push_back({j, lo_[j], hi_[j]});
      }
    }
    for (auto& kid : *kids) {
      auto child = std::make_unique<Node>();
      child->id = next_node_id_++;
      child->parent = node.id;
      child->depth = node.depth + 1;
      child->bound = node.bound;
      child->has_bound = true;
      child->bounds = base;
      for (const auto& c : kid.bounds) {
        auto it = std::find_if(child->bounds.begin(), child->bounds.end(),
                               [&](const BoundChange& b) { return b.var == c.var; });
        if (it != child->bounds.end()) {
          it->lo = max(it->lo, c.lo);
          it->hi = min(it->hi, c.hi);
        } else {
          child->bounds.push_back(c);
        }
      }
      child->local_rows = current_local_rows_;
      for (auto& row : kid.rows) child->local_rows.emplace_back(next_local_id_++, std::move(row));
      child->payload = kid.payload.has_value() ? std::move(kid.payload) : current_payload_;
      child->branch_var = kid.branch_var >= 0 ? kid.branch_var
                                              : (kid.bounds.size() == 1 ? kid.bounds[0].var : -1);
      children.push_back(std::move(child));
    }
    return NodeOutcome::kBranched;
  }
}

MipResult Solver::solve() {
  start_ = std::chrono::steady_clock::now();
  MipResult result;
  simplex_ = std::make_unique<lp::Simplex>(model_.lp);
  row_map_.clear();
  for (int r = 0; r < num_rows(); ++r) row_map_.push_back(r);
  rebuild_model_to_simplex();
  lp_x_.assign(num_vars(), Rational(0));

  auto cmp = [this](const std::unique_ptr<Node>& a, const std::unique_ptr<Node>& b) {
    // Priority queue top = best bound, then newest node.
    if (a->bound != b->bound) return maximize_ ? a->bound < b->bound : a->bound > b->bound;
    return a->id < b->id;
  };
  std::vector<std::unique_ptr<Node>> open;
  auto push = [&](std::unique_ptr<Node> n) {
    open.push_back(std::move(n));
    std::push_heap(open.begin(), open.end(), cmp);
  };
  auto pop = [&]() {
    std::pop_heap(open.begin(), open.end(), cmp);
    auto n = std::move(open.back());
    open.pop_back();
    return n;
  };

  auto root = std::make_unique<Node>();
  root->id = next_node_id_++;
  std::unique_ptr<Node> next = std::move(root);
  bool limit_hit = false;

  while (next || !open.empty()) {
    std::unique_ptr<Node> node;
    if (next) {
      node = std::move(next);
    } else {
      node = pop();
    }
    if (node->has_bound && !can_improve(node->bound)) continue;
    if (time_up() || (options_.limits.nodes >= 0 && result.node_count >= options_.limits.nodes) ||
        (options_.stop_at_first_solution && solutions_found_ > 0)) {
      limit_hit = true;
      push(std::move(node));
      break;
    }
    ++result.node_count;
    std::vector<std::unique_ptr<Node>> children;
    const auto outcome = process(*node, children);
    if (outcome == NodeOutcome::kTimeout) {
      limit_hit = true;
      push(std::move(node));
      break;
    }
    if (outcome == NodeOutcome::kBranched) {
      next = std::move(children.front());
      for (std::size_t c = 1; c < children.size(); ++c) push(std::move(children[c]));
    }
    if (options_.stop_at_first_solution && solutions_found_ > 0) {
      limit_hit = true;
      if (next) push(std::move(next));
      break;
    }
  }

  result.incumbent = incumbent_;
  result.primal_bound = incumbent_value_;
  result.lp_count = lp_count_;
  result.pivots = simplex_->pivots();
  result.root_lp = root_lp_;
  result.trace = std::move(trace_);
  if (limit_hit) {
    std::optional<Rational> bound;
    for (const auto& n : open) {
      if (!n->has_bound) {
        bound.reset();
        break;
      }
      if (!bound || (maximize_ ? n->bound > *bound : n->bound < *bound)) bound = n->bound;
    }
    bool all_bounded = std::all_of(open.begin(), open.end(), [](const auto& n) { return n->has_bound; });
    if (all_bounded && bound) {
      result.dual_bound = bound;
      if (incumbent_value_ && (maximize_ ? *incumbent_value_ > *bound : *incumbent_value_ < *bound)) {
        result.dual_bound = incumbent_value_;
      }
    } else if (open.empty()) {
      result.dual_bound = incumbent_value_;
    }
    result.status = MipStatus::kLimit;
    if (open.empty() || std::none_of(open.begin(), open.end(), [&](const auto& n) {
          return !n->has_bound || can_improve(n->bound);
        })) {
      result.status = incumbent_value_ ? MipStatus::kOptimal : MipStatus::kInfeasible;
      result.dual_bound = incumbent_value_;
    }
  } else {
    result.status = incumbent_value_ ? MipStatus::kOptimal : MipStatus::kInfeasible;
    result.dual_bound = incumbent_value_;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
  result.wall_time = elapsed.count();
  return result;
}

}  // namespace rclab::mip
