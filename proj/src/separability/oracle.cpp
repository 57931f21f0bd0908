#include <algorithm>
#include <stdexcept>

#include "rclab/exactlp.hpp"
#include "rclab/separability.hpp"

namespace rclab::sep {
namespace {

int rank_of(std::vector<geometry::RationalVector> m) {
  if (m.empty()) return 0;
  const std::size_t cols = m[0].size();
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::size_t p = row;
    while (p < m.size() && m[p][c].is_zero()) ++p;
    if (p == m.size()) continue;
    std::swap(m[row], m[p]);
    for (std::size_t r = row + 1; r < m.size(); ++r) {
      if (m[r][c].is_zero()) continue;
      const Rational f = m[r][c] / m[row][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k].sub_mul(f, m[row][k]);
    }
    ++row;
  }
  return static_cast<int>(row);
}

}  // namespace

Oracle::Oracle(PointSet x, Rational eps) : x_(std::move(x)), eps_(std::move(eps)) {
  if (x_.empty()) throw std::invalid_argument("Oracle: X is empty");
  if (eps_.sign() <= 0) throw std::invalid_argument("Oracle: eps must be positive");
  rho_x_ = geometry::linf_radius(x_);
  hull_ = geometry::convex_hull_facets(x_);
  for (const auto& p : x_) {
    std::vector<geometry::RationalVector> normals;
    for (const auto& e : hull_.equations) normals.push_back(e.a);
    for (const auto& f : hull_.facets) {
      if (f.lhs(p) == f.b) normals.push_back(f.a);
    }
    if (rank_of(std::move(normals)) == x_.dim()) vertices_.push_back(p);
  }
}

std::optional<Inequality> Oracle::separate(std::span<const Point> f) const {
  ++calls_;
  const int d = x_.dim();
  const Rational bound = Rational(d) * rho_x_;
  lp::LinearProgram prog;
  for (int j = 0; j < d; ++j) prog.add_variable(0, Rational(-1), Rational(1));
  const int b = prog.add_variable(0, -bound, bound);
  auto row = [&](const Point& p) {
    std::vector<lp::Term> terms;
    for (int j = 0; j < d; ++j) {
      if (p[j] != 0) terms.push_back({j, Rational(p[j])});
    }
    terms.push_back({b, Rational(-1)});
    return terms;
  };
  for (const auto& v : vertices_) prog.add_row(row(v), lp::RowType::kLessEqual, 0);
  for (const auto& y : f) prog.add_row(row(y), lp::RowType::kGreaterEqual, eps_);
  const auto sol = lp::solve(prog);
  if (sol.status != lp::LpStatus::kOptimal) return std::nullopt;
  Inequality ineq;
  ineq.a.assign(sol.primal.begin(), sol.primal.begin() + d);
  ineq.b = sol.primal[b];
  return ineq;
}

bool Oracle::certifies(const Inequality& ineq, std::span<const Point> f) const {
  if (static_cast<int>(ineq.a.size()) != x_.dim()) return false;
  if (ineq.sup_norm() > Rational(1)) return false;
  for (const auto& p : x_) {
    if (ineq.lhs(p) > ineq.b) return false;
  }
  const Rational need = ineq.b + eps_;
  return std::all_of(f.begin(), f.end(), [&](const Point& y) { return ineq.lhs(y) >= need; });
}

std::optional<Inequality> eps_separable(const PointSet& x, std::span<const Point> f, const Rational& eps) {
  return Oracle(x, eps).separate(f);
}

ConflictCertificate sparsify_conflict(const Oracle& oracle, std::span<const Point> f) {
  std::vector<Point> acc;
  for (const auto& p : f) {
    acc.push_back(p);
    if (!oracle.separable(acc)) break;
  }
  if (oracle.separable(acc)) throw std::invalid_argument("sparsify_conflict: the set is separable");
  for (std::size_t i = 0; i < acc.size();) {
    std::vector<Point> without = acc;
    without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
    if (!oracle.separable(without)) {
      acc = std::move(without);
    } else {
      ++i;
    }
  }
  return ConflictCertificate{PointSet(oracle.x().dim(), std::move(acc)), true};
}

ConflictCertificate sparsify_conflict(const PointSet& x, std::span<const Point> f, const Rational& eps) {
  return sparsify_conflict(Oracle(x, eps), f);
}

bool hulls_intersect(std::span<const Point> a, std::span<const Point> b) {
  if (a.empty() || b.empty()) return false;
  const std::size_t d = a[0].size();
  lp::LinearProgram prog;
  for (std::size_t i = 0; i < a.size() + b.size(); ++i) prog.add_variable(0, Rational(0), std::nullopt);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<lp::Term> terms;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i][j] != 0) terms.push_back({static_cast<int>(i), Rational(a[i][j])});
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (b[i][j] != 0) terms.push_back({static_cast<int>(a.size() + i), Rational(-b[i][j])});
    }
    prog.add_row(std::move(terms), lp::RowType::kEqual, 0);
  }
  std::vector<lp::Term> sa;
  std::vector<lp::Term> sb;
  for (std::size_t i = 0; i < a.size(); ++i) sa.push_back({static_cast<int>(i), Rational(1)});
  for (std::size_t i = 0; i < b.size(); ++i) sb.push_back({static_cast<int>(a.size() + i), Rational(1)});
  prog.add_row(std::move(sa), lp::RowType::kEqual, 1);
  prog.add_row(std::move(sb), lp::RowType::kEqual, 1);
  return lp::solve(prog).status == lp::LpStatus::kOptimal;
}

bool verify_relaxation(const PointSet& x, const PointSet& y, std::span<const Inequality> ineqs, const Rational& eps) {
  for (const auto& ineq : ineqs) {
    if (static_cast<int>(ineq.a.size()) != x.dim() || ineq.sup_norm() > Rational(1)) return false;
    for (const auto& p : x) {
      if (ineq.lhs(p) > ineq.b) return false;
    }
  }
  for (const auto& p : y) {
    const bool cut = std::any_of(ineqs.begin(), ineqs.end(),
                                 [&](const Inequality& ineq) { return ineq.lhs(p) >= ineq.b + eps; });
    if (!cut) return false;
  }
  return true;
}

}  // namespace rclab::sep
