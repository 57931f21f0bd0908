#include <stdexcept>

#include "rclab/matrixmodels.hpp"

namespace rclab::models {

std::vector<Inequality> outer_description(const geometry::FacetList& hull) {
  std::vector<Inequality> out = hull.facets;
  for (const auto& e : hull.equations) {
    out.push_back(e.normalized());
    Inequality neg;
    for (const auto& c : e.a) neg.a.push_back(-c);
    neg.b = -e.b;
    out.push_back(neg.normalized());
  }
  return out;
}

RcInstance make_instance(PointSet x, PointSet y, Rational eps, std::optional<int> k) {
  if (x.empty()) throw std::invalid_argument("instance: X is empty");
  if (eps.sign() <= 0) throw std::invalid_argument("instance: eps must be positive");
  if (!y.empty() && y.dim() != x.dim()) throw std::invalid_argument("instance: dimension mismatch");
  for (const auto& p : y) {
    if (x.contains(p)) throw std::invalid_argument("instance: Y meets X at " + geometry::to_string(p));
  }
  if (!geometry::is_lattice_convex(x)) throw std::invalid_argument("instance: X is not lattice-convex");

  RcInstance inst;
  inst.rho_x = geometry::linf_radius(x);
  inst.rho_y = y.empty() ? Rational(0) : geometry::linf_radius(y);
  inst.big_m = Rational(x.dim()) * (inst.rho_x + inst.rho_y) + eps;
  inst.facets_of_x = geometry::convex_hull_facets(x);
  inst.k = k ? *k : static_cast<int>(outer_description(inst.facets_of_x).size());
  if (inst.k < 0) throw std::invalid_argument("instance: k must be nonnegative");
  if (y.empty()) y = PointSet(x.dim());
  inst.x = std::move(x);
  inst.y = std::move(y);
  inst.eps = std::move(eps);
  return inst;
}

}  // namespace rclab::models
