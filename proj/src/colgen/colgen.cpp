#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <stdexcept>

#include "rclab/colgen.hpp"

namespace rclab::cg {

namespace {

bool has(std::span<const int> members, int y) { return std::binary_search(members.begin(), members.end(), y); }

std::vector<Point> points_of(const PointSet& y, std::span<const int> members) {
  std::vector<Point> out;
  out.reserve(members.size());
  for (int i : members) out.push_back(y[i]);
  return out;
}

}  // namespace

bool allows(const RfDecision& d, std::span<const int> members) {
  const bool a = has(members, d.y1);
  const bool b = has(members, d.y2);
  return d.mode == RfMode::kDiffer ? !(a && b) : a == b;
}

bool allows_all(std::span<const RfDecision> ds, std::span<const int> members) {
  return std::all_of(ds.begin(), ds.end(), [&](const RfDecision& d) { return allows(d, members); });
}

std::vector<Column> initial_columns(const models::RcInstance& inst) {
  const sep::Oracle oracle(inst.x, inst.eps);
  const int ny = static_cast<int>(inst.y.size());
  std::vector<Column> out;
  std::set<std::vector<int>> seen;
  auto push = [&](std::vector<int> members, Inequality witness) {
    if (members.empty() || !seen.insert(members).second) return;
    Column c{std::move(members), std::move(witness), static_cast<int>(out.size())};
    out.push_back(std::move(c));
  };
  for (const auto& f : models::outer_description(inst.facets_of_x)) {
    const Inequality n = f.normalized();
    std::vector<int> members;
    for (int y = 0; y < ny; ++y) {
      if (n.lhs(inst.y[y]) >= n.b + inst.eps) members.push_back(y);
    }
    if (members.empty()) continue;
    const auto pts = points_of(inst.y, members);
    if (oracle.certifies(n, pts)) {
      push(std::move(members), n);
    } else if (auto w = oracle.separate(pts)) {
      push(std::move(members), *w);
    }
  }
  for (int y = 0; y < ny; ++y) {
    const std::vector<Point> pt{inst.y[y]};
    auto w = oracle.separate(pt);
    if (!w) throw std::invalid_argument("colgen: point " + geometry::to_string(inst.y[y]) + " is not eps-separable");
    push({y}, *w);
  }
  return out;
}

Rational fractionality(const Rational& z) { return Rational(1, 2) - min(z, Rational(1) - z); }

std::optional<RfChoice> ryan_foster_select(std::span<const Rational> z, std::span<const Column> pool) {
  std::vector<int> frac;
  for (const auto& c : pool) {
    if (c.id < static_cast<int>(z.size()) && !z[c.id].is_integer()) frac.push_back(c.id);
  }
  std::sort(frac.begin(), frac.end());
  std::map<int, const Column*> by_id;
  for (const auto& c : pool) by_id[c.id] = &c;

  std::optional<RfChoice> best;
  Rational best_score;
  for (std::size_t p = 0; p < frac.size(); ++p) {
    const Column& ci = *by_id[frac[p]];
    for (std::size_t q = p + 1; q < frac.size(); ++q) {
      const Column& cj = *by_id[frac[q]];
      std::vector<int> inter;
      std::vector<int> diff;
      std::set_intersection(ci.members.begin(), ci.members.end(), cj.members.begin(), cj.members.end(),
                            std::back_inserter(inter));
      std::set_symmetric_difference(ci.members.begin(), ci.members.end(), cj.members.begin(), cj.members.end(),
                                    std::back_inserter(diff));
      if (inter.empty() || diff.empty()) continue;
      const Rational score = fractionality(z[ci.id]) + fractionality(z[cj.id]);
      if (best && score <= best_score) continue;
      RfChoice ch;
      ch.col_i = ci.id;
      ch.col_j = cj.id;
      ch.differ = {inter.front(), diff.front(), RfMode::kDiffer};
      ch.together = {inter.front(), diff.front(), RfMode::kTogether};
      best = ch;
      best_score = score;
    }
  }
  return best;
}

std::vector<int> enabled_columns(std::span<const Column> pool, std::span<const RfDecision> ds) {
  std::vector<int> out;
  for (const auto& c : pool) {
    if (allows_all(ds, c.members)) out.push_back(c.id);
  }
  return out;
}

std::optional<std::vector<int>> greedy_cover(int ny, std::span<const Column> pool) {
  std::vector<bool> covered(ny, false);
  int left = ny;
  std::vector<int> chosen;
  while (left > 0) {
    int best = -1;
    int best_gain = 0;
    for (const auto& c : pool) {
      int gain = 0;
      for (int y : c.members) gain += covered[y] ? 0 : 1;
      if (gain > best_gain || (gain == best_gain && gain > 0 && c.id < best)) {
        best = c.id;
        best_gain = gain;
      }
    }
    if (best < 0) return std::nullopt;
    const auto it = std::find_if(pool.begin(), pool.end(), [&](const Column& c) { return c.id == best; });
    for (int y : it->members) {
      if (!covered[y]) {
        covered[y] = true;
        --left;
      }
    }
    chosen.push_back(best);
  }
  return chosen;
}

// ---------------------------------------------------------------------------
// Pricing

namespace {

struct PricingContext {
  const models::RcInstance& inst;
  const sep::Oracle& oracle;
  std::vector<std::pair<int, int>> hiding;

  PricingContext(const models::RcInstance& i, const sep::Oracle& o, bool use_hiding) : inst(i), oracle(o) {
    if (use_hiding) hiding = sep::hiding_pair_indices(inst.x, inst.y);
  }

  PricingResult run(std::span<const Rational> w, std::span<const RfDecision> ds, const Rational& threshold,
                    double seconds) const;
  /// Greedy by weight from a few seeds; a set of weight above the threshold, if found.
  std::optional<std::pair<Column, Rational>> greedy(std::span<const Rational> w, std::span<const RfDecision> ds,
                                                    const Rational& threshold) const;
  /// Extends the set by points the witness already separates and re-checks it.
  Column finish(std::vector<int> members, Inequality ineq, std::span<const RfDecision> ds) const;
};

PricingResult PricingContext::run(std::span<const Rational> w, std::span<const RfDecision> ds,
                                  const Rational& threshold, double seconds) const {
  const int ny = static_cast<int>(inst.y.size());
  const int d = inst.dim();
  PricingResult out;

  // Points that can carry weight, closed under "together" partners.
  std::vector<bool> used(ny, false);
  for (int y = 0; y < ny; ++y) used[y] = w[y].sign() > 0;
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& dec : ds) {
      if (dec.mode != RfMode::kTogether || used[dec.y1] == used[dec.y2]) continue;
      used[dec.y1] = used[dec.y2] = true;
      grew = true;
    }
  }
  Rational total = 0;
  for (int y = 0; y < ny; ++y) {
    if (used[y]) total += w[y];
  }
  if (total <= threshold) return out;

  mip::Model m;
  m.lp.sense = lp::Sense::kMaximize;
  const Rational bmax = Rational(d) * inst.rho_x;
  std::vector<int> a(d);
  for (int j = 0; j < d; ++j) a[j] = m.add_variable(0, Rational(-1), Rational(1), false);
  const int b = m.add_variable(0, -bmax, bmax, false);
  std::vector<int> s(ny, -1);
  for (int y = 0; y < ny; ++y) {
    if (used[y]) s[y] = m.add_binary(w[y]);
  }
  for (const auto& v : oracle.vertices()) {
    std::vector<lp::Term> t;
    for (int j = 0; j < d; ++j) {
      if (v[j] != 0) t.push_back({a[j], Rational(v[j])});
    }
    t.push_back({b, Rational(-1)});
    m.add_row(std::move(t), lp::RowType::kLessEqual, 0);
  }
  for (int y = 0; y < ny; ++y) {
    if (s[y] < 0) continue;
    std::vector<lp::Term> t;
    for (int j = 0; j < d; ++j) {
      if (inst.y[y][j] != 0) t.push_back({a[j], Rational(inst.y[y][j])});
    }
    t.push_back({b, Rational(-1)});
    t.push_back({s[y], -inst.big_m});
    m.add_row(std::move(t), lp::RowType::kGreaterEqual, inst.eps - inst.big_m);
  }
  for (const auto& dec : ds) {
    if (s[dec.y1] < 0 || s[dec.y2] < 0) continue;
    if (dec.mode == RfMode::kDiffer) {
      m.add_row({{s[dec.y1], 1}, {s[dec.y2], 1}}, lp::RowType::kLessEqual, 1);
    } else {
      m.add_row({{s[dec.y1], 1}, {s[dec.y2], -1}}, lp::RowType::kEqual, 0);
    }
  }
  for (const auto& [p, q] : hiding) {
    if (s[p] >= 0 && s[q] >= 0) m.add_row({{s[p], 1}, {s[q], 1}}, lp::RowType::kLessEqual, 1);
  }

  mip::Options mo;
  mo.limits.time_seconds = std::max(seconds, 0.0);
  mo.objective_limit = threshold;
  mip::Solver solver(std::move(m), mo);
  const auto res = solver.solve();
  if (res.incumbent.empty() || !res.primal_bound || *res.primal_bound <= threshold) {
    out.complete = res.status != mip::MipStatus::kLimit;
    return out;
  }

  Inequality ineq;
  for (int j = 0; j < d; ++j) ineq.a.push_back(res.incumbent[a[j]]);
  ineq.b = res.incumbent[b];
  std::vector<int> members;
  for (int y = 0; y < ny; ++y) {
    if (s[y] >= 0 && res.incumbent[s[y]] == Rational(1)) members.push_back(y);
  }
  out.value = *res.primal_bound;
  out.column = finish(std::move(members), std::move(ineq), ds);
  return out;
}

Column PricingContext::finish(std::vector<int> members, Inequality ineq, std::span<const RfDecision> ds) const {
  const int ny = static_cast<int>(inst.y.size());
  // Every other point the witness already separates joins when the decisions allow it.
  const Rational need = ineq.b + inst.eps;
  for (bool grew = true; grew;) {
    grew = false;
    for (int y = 0; y < ny; ++y) {
      if (has(members, y) || ineq.lhs(inst.y[y]) < need) continue;
      std::vector<int> next = members;
      next.insert(std::upper_bound(next.begin(), next.end(), y), y);
      if (!allows_all(ds, next)) continue;
      members = std::move(next);
      grew = true;
    }
  }
  const auto pts = points_of(inst.y, members);
  if (!oracle.certifies(ineq, pts)) {
    auto wit = oracle.separate(pts);
    if (!wit) throw std::logic_error("colgen: priced set is not separable");
    ineq = *wit;
  }
  return Column{std::move(members), std::move(ineq), -1};
}

std::optional<std::pair<Column, Rational>> PricingContext::greedy(std::span<const Rational> w,
                                                                  std::span<const RfDecision> ds,
                                                                  const Rational& threshold) const {
  const int ny = static_cast<int>(inst.y.size());
  // Points tied together by decisions enter as one group.
  std::vector<int> parent(ny);
  for (int y = 0; y < ny; ++y) parent[y] = y;
  auto find = [&](int y) {
    while (parent[y] != y) y = parent[y] = parent[parent[y]];
    return y;
  };
  for (const auto& dec : ds) {
    if (dec.mode == RfMode::kTogether) parent[find(dec.y1)] = find(dec.y2);
  }
  std::vector<std::vector<int>> group(ny);
  for (int y = 0; y < ny; ++y) group[find(y)].push_back(y);

  std::vector<int> order;
  for (int y = 0; y < ny; ++y) {
    if (w[y].sign() > 0) order.push_back(y);
  }
  std::stable_sort(order.begin(), order.end(), [&](int p, int q) { return w[p] > w[q]; });

  std::optional<std::pair<Column, Rational>> best;
  const int seeds = std::min<int>(4, static_cast<int>(order.size()));
  for (int seed = 0; seed < seeds; ++seed) {
    std::vector<int> members;
    std::optional<Inequality> wit;
    Rational weight = 0;
    auto try_add = [&](int y) {
      const auto& g = group[find(y)];
      if (has(members, y)) return;
      std::vector<int> next = members;
      for (int p : g) next.insert(std::upper_bound(next.begin(), next.end(), p), p);
      if (!allows_all(ds, next)) return;
      bool ok = wit.has_value();
      if (ok) {
        for (int p : g) ok = ok && wit->lhs(inst.y[p]) >= wit->b + inst.eps;
      }
      if (!ok) {
        auto nw = oracle.separate(points_of(inst.y, next));
        if (!nw) return;
        wit = std::move(nw);
      }
      members = std::move(next);
      for (int p : g) weight += w[p];
    };
    try_add(order[seed]);
    for (int y : order) try_add(y);
    if (wit && weight > threshold && (!best || weight > best->second)) {
      best.emplace(finish(std::move(members), std::move(*wit), ds), weight);
    }
  }
  return best;
}

}  // namespace

PricingResult price(const models::RcInstance& inst, const sep::Oracle& oracle, std::span<const Rational> weights,
                    std::span<const RfDecision> ds, const Rational& threshold, const PricingOptions& opts) {
  const PricingContext ctx(inst, oracle, opts.hiding);
  return ctx.run(weights, ds, threshold, opts.time_seconds);
}

// ---------------------------------------------------------------------------
// Branch-and-price

namespace {

using Decisions = std::vector<RfDecision>;

struct Master {
  const models::RcInstance& inst;
  sep::Oracle oracle;
  PricingContext pricing;
  std::vector<Column> pool;
  std::set<std::vector<int>> keys;
  std::size_t greedy_pool_size = 0;
  bool restricted_done = false;
  double restricted_seconds = 30;
  std::function<void(std::span<const Rational>, std::span<const Column>)> on_branch;

  Master(const models::RcInstance& i, bool hiding) : inst(i), oracle(i.x, i.eps), pricing(i, oracle, hiding) {}
};

const Decisions& decisions_of(const mip::Solver& s) {
  static const Decisions kNone;
  if (!s.payload().has_value()) return kNone;
  return *std::any_cast<Decisions>(&s.payload());
}

class MasterPricer : public mip::Pricer {
 public:
  explicit MasterPricer(Master& m) : m_(m) {}

  void activate(mip::Solver& s) override {
    const auto& ds = decisions_of(s);
    if (ds.empty()) return;
    for (const auto& c : m_.pool) {
      if (!allows_all(ds, c.members)) s.tighten(c.id, 0, 0);
    }
  }

  int price(mip::Solver& s, std::span<const Rational> duals) override {
    const int ny = static_cast<int>(m_.inst.y.size());
    std::vector<Rational> w(ny);
    for (int y = 0; y < ny; ++y) w[y] = max(duals[y], Rational(0));
    const int added = run(s, w, Rational(1));
    if (added == 0) offer_greedy(s);
    return added;
  }

  int price_infeasible(mip::Solver& s, std::span<const Rational> farkas) override {
    const int ny = static_cast<int>(m_.inst.y.size());
    const bool negative = std::any_of(farkas.begin(), farkas.begin() + ny, [](const Rational& f) { return f.sign() < 0; });
    std::vector<Rational> w(ny);
    for (int y = 0; y < ny; ++y) w[y] = max(negative ? -farkas[y] : farkas[y], Rational(0));
    return run(s, w, Rational(0));
  }

 private:
  int run(mip::Solver& s, const std::vector<Rational>& w, const Rational& threshold) {
    const auto& ds = decisions_of(s);
    std::optional<Column> found;
    if (auto g = m_.pricing.greedy(w, ds, threshold); g && !m_.keys.contains(g->first.members)) {
      found = std::move(g->first);
    } else {
      auto res = m_.pricing.run(w, ds, threshold, s.remaining_seconds());
      if (!res.column) return res.complete ? 0 : -1;
      found = std::move(res.column);
    }
    Column c = std::move(*found);
    if (m_.keys.contains(c.members)) throw std::logic_error("colgen: pricing repeated an active column");
    std::vector<lp::Term> entries;
    for (int y : c.members) entries.push_back({y, Rational(1)});
    c.id = s.add_column(1, 0, std::nullopt, entries, true);
    m_.keys.insert(c.members);
    m_.pool.push_back(std::move(c));
    return 1;
  }

  void offer_greedy(mip::Solver& s) {
    if (m_.pool.size() == m_.greedy_pool_size) return;
    m_.greedy_pool_size = m_.pool.size();
    const int ny = static_cast<int>(m_.inst.y.size());
    const auto cover = greedy_cover(ny, m_.pool);
    if (!cover) return;
    std::vector<Rational> x(s.num_vars(), Rational(0));
    for (int id : *cover) x[id] = 1;
    s.set_incumbent(std::move(x));
    if (s.node_depth() == 0 && !m_.restricted_done) {
      m_.restricted_done = true;
      restricted_master(s);
    }
  }

  // Set cover over the current pool, solved once at the root with a short limit.
  void restricted_master(mip::Solver& s) {
    const int ny = static_cast<int>(m_.inst.y.size());
    mip::Model rm;
    rm.objective_integral = true;
    for (int y = 0; y < ny; ++y) rm.add_row({}, lp::RowType::kGreaterEqual, 1);
    for (const auto& c : m_.pool) {
      const int v = rm.add_binary(1);
      for (int y : c.members) rm.lp.rows[y].terms.push_back({v, Rational(1)});
    }
    mip::Options mo;
    mo.limits.time_seconds = std::max(0.0, std::min(m_.restricted_seconds, s.remaining_seconds() / 4));
    if (s.incumbent_value()) mo.objective_limit = *s.incumbent_value();
    mip::Solver sub(std::move(rm), mo);
    const auto res = sub.solve();
    if (res.incumbent.empty()) return;
    std::vector<Rational> x(s.num_vars(), Rational(0));
    for (std::size_t j = 0; j < res.incumbent.size(); ++j) x[j] = res.incumbent[j];
    s.set_incumbent(std::move(x));
  }

  Master& m_;
};

class RyanFosterBranching : public mip::BranchingRule {
 public:
  explicit RyanFosterBranching(Master& m) : m_(m) {}

  std::optional<std::vector<mip::Child>> branch(mip::Solver& s, std::span<const Rational> x) override {
    if (m_.on_branch) m_.on_branch(x, m_.pool);
    const auto choice = ryan_foster_select(x, m_.pool);
    if (!choice) throw std::logic_error("colgen: no Ryan-Foster pair in a fractional master solution");
    const auto& ds = decisions_of(s);
    std::vector<mip::Child> kids(2);
    Decisions differ = ds;
    differ.push_back(choice->differ);
    Decisions together = ds;
    together.push_back(choice->together);
    kids[0].payload = std::move(differ);
    kids[1].payload = std::move(together);
    return kids;
  }

 private:
  Master& m_;
};

struct MasterRun {
  mip::MipResult res;
  std::vector<Column> pool;
};

MasterRun run_master(const models::RcInstance& inst, const ColgenOptions& opts) {
  Master master(inst, opts.hiding);
  master.on_branch = opts.on_branch;
  mip::Model model;
  model.objective_integral = true;
  const int ny = static_cast<int>(inst.y.size());
  for (int y = 0; y < ny; ++y) model.add_row({}, lp::RowType::kGreaterEqual, 1);
  for (auto& c : initial_columns(inst)) {
    c.id = model.add_variable(1, Rational(0), std::nullopt, true);
    for (int y : c.members) model.lp.rows[y].terms.push_back({c.id, Rational(1)});
    master.keys.insert(c.members);
    master.pool.push_back(std::move(c));
  }
  mip::Options mo;
  mo.limits = opts.limits;
  if (opts.root_only) mo.limits.nodes = 1;
  mo.separation_rounds_root = 0;
  mo.separation_rounds = 0;
  mip::Solver solver(std::move(model), mo);
  solver.register_pricer(std::make_shared<MasterPricer>(master));
  solver.register_branching(std::make_shared<RyanFosterBranching>(master));
  MasterRun out;
  out.res = solver.solve();
  out.pool = std::move(master.pool);
  return out;
}

std::vector<Column> chosen_columns(const std::vector<Rational>& x, const std::vector<Column>& pool) {
  std::vector<Column> out;
  for (const auto& c : pool) {
    if (c.id < static_cast<int>(x.size()) && x[c.id].sign() > 0) out.push_back(c);
  }
  return out;
}

}  // namespace

ColgenResult solve_colgen(const models::RcInstance& inst, const ColgenOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  if (inst.y.empty()) {
    ColgenResult empty;
    empty.status = mip::MipStatus::kOptimal;
    empty.value = 0;
    empty.dual_bound = 0;
    empty.root_lp = Rational(0);
    return empty;
  }
  auto run = run_master(inst, opts);
  ColgenResult out;
  out.status = run.res.status;
  out.node_count = run.res.node_count;
  out.lp_count = run.res.lp_count;
  out.columns = static_cast<std::int64_t>(run.pool.size());
  out.root_lp = run.res.root_lp;
  if (!run.res.incumbent.empty()) {
    out.solution = chosen_columns(run.res.incumbent, run.pool);
    out.value = static_cast<int>(out.solution.size());
    for (const auto& c : out.solution) out.relaxation.push_back(c.witness);
  }
  if (run.res.dual_bound) out.dual_bound = static_cast<int>(run.res.dual_bound->ceil().to_int64());
  if (!out.dual_bound && out.root_lp) out.dual_bound = static_cast<int>(out.root_lp->ceil().to_int64());
  if (out.status == mip::MipStatus::kOptimal) out.dual_bound = out.value;
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

RootBounds root_bounds(const models::RcInstance& inst, const ColgenOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  ColgenOptions o = opts;
  o.root_only = true;
  auto run = run_master(inst, o);
  RootBounds out;
  out.lp_count = run.res.lp_count;
  out.lp_value = run.res.root_lp;
  if (out.lp_value) out.dual_bound = static_cast<int>(out.lp_value->ceil().to_int64());
  if (inst.y.empty()) {
    out.dual_bound = 0;
    out.lp_value = Rational(0);
    out.incumbent = std::vector<Column>{};
  } else if (!run.res.incumbent.empty()) {
    out.incumbent = chosen_columns(run.res.incumbent, run.pool);
  } else if (auto cover = greedy_cover(static_cast<int>(inst.y.size()), run.pool)) {
    std::vector<Column> cols;
    for (int id : *cover) cols.push_back(run.pool[id]);
    out.incumbent = std::move(cols);
  }
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace rclab::cg
