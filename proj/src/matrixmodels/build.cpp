#include <algorithm>
#include <stdexcept>

#include "plugins.hpp"

namespace rclab::models {
namespace {

using lp::RowType;
using lp::Term;

void check_options(const RcInstance& inst, const EnhancementOptions& opts) {
  if (opts.sym == Sym::kAdvanced && opts.a_sorting) {
    throw std::invalid_argument("advanced symmetry handling cannot be combined with a-sorting rows");
  }
  for (const auto& g : opts.generators) {
    if (g.size() != inst.y.size()) throw std::invalid_argument("generator size does not match |Y|");
    std::vector<int> sorted = g;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < static_cast<int>(sorted.size()); ++i) {
      if (sorted[i] != i) throw std::invalid_argument("generator is not a permutation of Y");
    }
  }
}

// s, u and the rows shared by both models: cover, linking, u-sorting.
void add_assignment_part(BuiltModel& m, const EnhancementOptions& opts) {
  auto& v = m.vars;
  auto& model = m.model;
  v.s0 = model.lp.num_vars;
  for (int y = 0; y < v.ny; ++y) {
    for (int i = 0; i < v.k; ++i) model.add_binary(0);
  }
  v.u0 = model.lp.num_vars;
  for (int i = 0; i < v.k; ++i) model.add_binary(1);
  model.objective_integral = true;

  for (int y = 0; y < v.ny; ++y) {
    std::vector<Term> t;
    for (int i = 0; i < v.k; ++i) t.push_back({v.s(y, i), Rational(1)});
    model.add_row(std::move(t), RowType::kGreaterEqual, 1);
  }
  for (int y = 0; y < v.ny; ++y) {
    for (int i = 0; i < v.k; ++i) {
      model.add_row({{v.s(y, i), Rational(1)}, {v.u(i), Rational(-1)}}, RowType::kLessEqual, 0);
    }
  }
  if (opts.sym != Sym::kNone) {
    for (int i = 0; i + 1 < v.k; ++i) {
      model.add_row({{v.u(i), Rational(1)}, {v.u(i + 1), Rational(-1)}}, RowType::kGreaterEqual, 0);
    }
  }
}

void add_plugins(BuiltModel& m, const EnhancementOptions& opts) {
  const auto& v = m.vars;
  if (v.ny == 0 || v.k == 0) return;
  if (opts.hiding) {
    auto pairs = sep::hiding_pair_indices(m.inst->x, m.inst->y);
    if (!pairs.empty()) m.separators.push_back(std::make_shared<detail::HidingSeparator>(std::move(pairs), v));
  }
  if (opts.prop) {
    m.propagators.push_back(std::make_shared<detail::ConvexityPropagator>(m.inst, v, opts.prop_intersection));
  }
  if (opts.sym == Sym::kAdvanced) {
    std::vector<std::pair<std::vector<int>, std::vector<int>>> pairs;
    for (int i = 0; i + 1 < v.k; ++i) {
      std::vector<int> a, b;
      for (int y = 0; y < v.ny; ++y) {
        a.push_back(v.s(y, i));
        b.push_back(v.s(y, i + 1));
      }
      pairs.emplace_back(std::move(a), std::move(b));
    }
    for (const auto& g : opts.generators) {
      std::vector<int> a, b;
      for (int y = 0; y < v.ny; ++y) {
        for (int i = 0; i < v.k; ++i) {
          a.push_back(v.s(y, i));
          b.push_back(v.s(g[y], i));
        }
      }
      if (a != b) pairs.emplace_back(std::move(a), std::move(b));
    }
    if (!pairs.empty()) {
      auto lex = std::make_shared<detail::LexPlugin>(std::move(pairs));
      m.propagators.push_back(lex);
      m.separators.push_back(lex);
    }
  }
}

}  // namespace

BuiltModel build_compact(const RcInstance& inst, const EnhancementOptions& opts) {
  check_options(inst, opts);
  BuiltModel m;
  m.kind = ModelKind::kCompact;
  m.inst = std::make_shared<const RcInstance>(inst);
  auto& v = m.vars;
  v.k = inst.k;
  v.d = inst.dim();
  v.ny = static_cast<int>(inst.y.size());
  auto& model = m.model;
  const Rational bmax = Rational(v.d) * inst.rho_x;

  v.a0 = model.lp.num_vars;
  for (int i = 0; i < v.k * v.d; ++i) model.add_variable(0, Rational(-1), Rational(1), false);
  v.b0 = model.lp.num_vars;
  for (int i = 0; i < v.k; ++i) model.add_variable(0, -bmax, bmax, false);
  add_assignment_part(m, opts);

  const sep::Oracle oracle(inst.x, inst.eps);
  for (int i = 0; i < v.k; ++i) {
    for (const auto& p : oracle.vertices()) {
      std::vector<Term> t;
      for (int j = 0; j < v.d; ++j) {
        if (p[j] != 0) t.push_back({v.a(i, j), Rational(p[j])});
      }
      t.push_back({v.b(i), Rational(-1)});
      model.add_row(std::move(t), RowType::kLessEqual, 0);
    }
  }
  for (int y = 0; y < v.ny; ++y) {
    const auto& p = inst.y[y];
    for (int i = 0; i < v.k; ++i) {
      std::vector<Term> t;
      for (int j = 0; j < v.d; ++j) {
        if (p[j] != 0) t.push_back({v.a(i, j), Rational(p[j])});
      }
      t.push_back({v.b(i), Rational(-1)});
      t.push_back({v.s(y, i), -inst.big_m});
      model.add_row(std::move(t), RowType::kGreaterEqual, inst.eps - inst.big_m);
    }
  }
  if (opts.sym == Sym::kSimple || opts.a_sorting) {
    for (int i = 0; i + 1 < v.k; ++i) {
      model.add_row({{v.a(i, 0), Rational(1)},
                     {v.a(i + 1, 0), Rational(-1)},
                     {v.u(i), Rational(2)},
                     {v.u(i + 1), Rational(-2)}},
                    RowType::kGreaterEqual, 0);
    }
  }
  if (opts.redundancy_coupling) {
    for (int i = 0; i < v.k; ++i) {
      for (int j = 0; j < v.d; ++j) {
        model.add_row({{v.a(i, j), Rational(1)}, {v.u(i), Rational(-1)}}, RowType::kLessEqual, 0);
        model.add_row({{v.a(i, j), Rational(1)}, {v.u(i), Rational(1)}}, RowType::kGreaterEqual, 0);
      }
      model.add_row({{v.b(i), Rational(1)}, {v.u(i), Rational(2) * bmax}}, RowType::kGreaterEqual, bmax);
    }
  }
  add_plugins(m, opts);
  m.incumbent = solution_from_inequalities(m, outer_description(inst.facets_of_x));
  return m;
}

BuiltModel build_cut_model(const RcInstance& inst, const EnhancementOptions& opts) {
  check_options(inst, opts);
  BuiltModel m;
  m.kind = ModelKind::kCut;
  m.inst = std::make_shared<const RcInstance>(inst);
  auto& v = m.vars;
  v.k = inst.k;
  v.d = inst.dim();
  v.ny = static_cast<int>(inst.y.size());
  add_assignment_part(m, opts);
  if (v.ny > 0 && v.k > 0) {
    m.separators.push_back(std::make_shared<detail::ConflictSeparator>(m.inst, v, opts.fractional_conflicts));
  }
  add_plugins(m, opts);
  m.incumbent = solution_from_inequalities(m, outer_description(inst.facets_of_x));
  return m;
}

std::optional<std::vector<Rational>> solution_from_inequalities(const BuiltModel& m, std::vector<Inequality> ineqs) {
  const auto& v = m.vars;
  const auto& inst = *m.inst;
  if (static_cast<int>(ineqs.size()) > v.k) return std::nullopt;
  const Rational bmax = Rational(v.d) * inst.rho_x;
  for (auto& q : ineqs) {
    if (q.sup_norm() > Rational(1)) q = q.normalized();
    if (q.b > bmax) q.b = bmax;
  }
  std::stable_sort(ineqs.begin(), ineqs.end(), [](const Inequality& a, const Inequality& b) { return a.a[0] > b.a[0]; });

  std::vector<Rational> x(m.model.lp.num_vars, Rational(0));
  for (int y = 0; y < v.ny; ++y) {
    bool covered = false;
    for (int i = 0; i < static_cast<int>(ineqs.size()); ++i) {
      if (ineqs[i].lhs(inst.y[y]) >= ineqs[i].b + inst.eps) {
        x[v.s(y, i)] = 1;
        covered = true;
      }
    }
    if (!covered) return std::nullopt;
  }
  for (int i = 0; i < v.k; ++i) {
    const bool used = i < static_cast<int>(ineqs.size());
    x[v.u(i)] = used ? 1 : 0;
    if (m.kind == ModelKind::kCompact) {
      for (int j = 0; j < v.d; ++j) x[v.a(i, j)] = used ? ineqs[i].a[j] : Rational(0);
      x[v.b(i)] = used ? ineqs[i].b : bmax;
    }
  }
  return x;
}

void add_objective_lower_bound(BuiltModel& m, int bound) {
  std::vector<Term> t;
  for (int i = 0; i < m.vars.k; ++i) t.push_back({m.vars.u(i), Rational(1)});
  m.model.add_row(std::move(t), RowType::kGreaterEqual, bound);
}

mip::MipResult solve_model(const BuiltModel& m, mip::Options opts) {
  mip::Solver solver(m.model, std::move(opts));
  for (const auto& p : m.propagators) solver.register_propagator(p);
  for (const auto& s : m.separators) solver.register_separator(s);
  if (m.incumbent) solver.set_incumbent(*m.incumbent);
  return solver.solve();
}

std::vector<Inequality> extract_relaxation(const BuiltModel& m, std::span<const Rational> x) {
  const auto& v = m.vars;
  const auto& inst = *m.inst;
  std::vector<Inequality> out;
  std::optional<sep::Oracle> oracle;
  for (int i = 0; i < v.k; ++i) {
    if (x[v.u(i)] != Rational(1)) continue;
    if (m.kind == ModelKind::kCompact) {
      Inequality q;
      for (int j = 0; j < v.d; ++j) q.a.push_back(x[v.a(i, j)]);
      q.b = x[v.b(i)];
      out.push_back(std::move(q));
      continue;
    }
    if (!oracle) oracle.emplace(inst.x, inst.eps);
    std::vector<Point> f;
    for (int y = 0; y < v.ny; ++y) {
      if (x[v.s(y, i)] == Rational(1)) f.push_back(inst.y[y]);
    }
    auto q = oracle->separate(f);
    if (!q) throw std::logic_error("extract_relaxation: column is not separable");
    out.push_back(std::move(*q));
  }
  return out;
}

}  // namespace rclab::models
