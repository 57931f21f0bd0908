#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "rclab/geometry.hpp"

namespace rclab::geometry {
namespace {

/// Calls `fn` for every integer point of the box [lo, hi] in lexicographic order.
template <typename Fn>
void for_each_in_box(const Point& lo, const Point& hi, Fn&& fn) {
  const std::size_t d = lo.size();
  for (std::size_t j = 0; j < d; ++j) {
    if (lo[j] > hi[j]) return;
  }
  Point p = lo;
  while (true) {
    fn(p);
    std::size_t j = d;
    while (j > 0) {
      --j;
      if (p[j] < hi[j]) {
        ++p[j];
        for (std::size_t k = j + 1; k < d; ++k) p[k] = lo[k];
        break;
      }
      if (j == 0) return;
    }
    if (d == 0) return;
  }
}

}  // namespace

PointSet::PointSet(int dim, std::vector<Point> points) : dim_(dim) {
  points_.reserve(points.size());
  for (auto& p : points) add(std::move(p));
}

int PointSet::index_of(const Point& p) const {
  const auto it = std::find(points_.begin(), points_.end(), p);
  return it == points_.end() ? -1 : static_cast<int>(it - points_.begin());
}

void PointSet::add(Point p) {
  if (static_cast<int>(p.size()) != dim_) {
    throw std::invalid_argument("PointSet: point " + to_string(p) + " has wrong dimension (expected " +
                                std::to_string(dim_) + ")");
  }
  if (!index_.insert(p).second) throw std::invalid_argument("PointSet: duplicate point " + to_string(p));
  points_.push_back(std::move(p));
}

Rational Inequality::lhs(const Point& x) const {
  Rational s = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j].is_zero() || x[j] == 0) continue;
    s += a[j] * Rational(x[j]);
  }
  return s;
}

Rational Inequality::lhs(std::span<const Rational> x) const {
  Rational s = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j].is_zero() || x[j].is_zero()) continue;
    s += a[j] * x[j];
  }
  return s;
}

Rational Inequality::sup_norm() const {
  Rational m = 0;
  for (const auto& v : a) m = max(m, v.abs());
  return m;
}

Inequality Inequality::normalized() const {
  const Rational m = sup_norm();
  if (m.is_zero() || m == Rational(1)) return *this;
  Inequality out = *this;
  for (auto& v : out.a) v /= m;
  out.b /= m;
  return out;
}

std::string Inequality::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t j = 0; j < a.size(); ++j) os << (j ? " " : "") << a[j];
  os << "] x <= " << b;
  return os.str();
}

bool FacetList::contains(const Point& x) const {
  for (const auto& f : facets) {
    if (f.lhs(x) > f.b) return false;
  }
  for (const auto& e : equations) {
    if (e.lhs(x) != e.b) return false;
  }
  return true;
}

bool FacetList::contains(std::span<const Rational> x) const {
  for (const auto& f : facets) {
    if (f.lhs(x) > f.b) return false;
  }
  for (const auto& e : equations) {
    if (e.lhs(x) != e.b) return false;
  }
  return true;
}

bool in_affine_hull(const Point& p, const FacetList& hull) {
  return std::all_of(hull.equations.begin(), hull.equations.end(),
                     [&](const Inequality& e) { return e.lhs(p) == e.b; });
}

std::pair<Point, Point> bounding_box(const PointSet& s) {
  if (s.empty()) throw std::invalid_argument("bounding_box: empty set");
  Point lo = s[0];
  Point hi = s[0];
  for (const auto& p : s) {
    for (int j = 0; j < s.dim(); ++j) {
      lo[j] = std::min(lo[j], p[j]);
      hi[j] = std::max(hi[j], p[j]);
    }
  }
  return {lo, hi};
}

PointSet integer_points_in_hull(const FacetList& hull, const Point& lo, const Point& hi) {
  PointSet out(static_cast<int>(lo.size()));
  for_each_in_box(lo, hi, [&](const Point& p) {
    if (hull.contains(p)) out.add(p);
  });
  return out;
}

bool is_lattice_convex(const PointSet& s) {
  if (s.empty()) throw std::invalid_argument("is_lattice_convex: empty set");
  const auto hull = convex_hull_facets(s);
  const auto [lo, hi] = bounding_box(s);
  bool ok = true;
  for_each_in_box(lo, hi, [&](const Point& p) {
    if (ok && !s.contains(p) && hull.contains(p)) ok = false;
  });
  return ok;
}

PointSet l1_neighborhood(const PointSet& x, int radius) {
  if (x.empty()) throw std::invalid_argument("l1_neighborhood: empty set");
  if (radius < 1) throw std::invalid_argument("l1_neighborhood: radius must be positive");
  auto [lo, hi] = bounding_box(x);
  for (int j = 0; j < x.dim(); ++j) {
    lo[j] -= radius;
    hi[j] += radius;
  }
  PointSet out(x.dim());
  for_each_in_box(lo, hi, [&](const Point& p) {
    if (x.contains(p)) return;
    for (const auto& q : x) {
      std::int64_t dist = 0;
      for (int j = 0; j < x.dim() && dist <= radius; ++j) dist += std::llabs(p[j] - q[j]);
      if (dist <= radius) {
        out.add(p);
        return;
      }
    }
  });
  return out;
}

Rational linf_radius(const PointSet& s) {
  if (s.empty()) throw std::invalid_argument("linf_radius: empty set");
  std::int64_t m = 0;
  for (const auto& p : s) {
    for (auto v : p) m = std::max<std::int64_t>(m, std::llabs(v));
  }
  return Rational(m);
}

bool segment_hits_hull(const Point& y1, const Point& y2, const FacetList& hull) {
  // p(λ) = y2 + λ (y1 - y2), λ ∈ [0, 1].
  Rational lo = 0;
  Rational hi = 1;
  Point dir(y1.size());
  for (std::size_t j = 0; j < y1.size(); ++j) dir[j] = y1[j] - y2[j];
  auto apply = [&](const Inequality& f, bool equality) {
    const Rational c = f.lhs(dir);
    const Rational rhs = f.b - f.lhs(y2);
    if (c.is_zero()) {
      if (equality ? !rhs.is_zero() : rhs.sign() < 0) {
        lo = 1;
        hi = 0;
      }
      return;
    }
    const Rational t = rhs / c;
    if (equality) {
      lo = max(lo, t);
      hi = min(hi, t);
    } else if (c.sign() > 0) {
      hi = min(hi, t);
    } else {
      lo = max(lo, t);
    }
  };
  for (const auto& e : hull.equations) apply(e, true);
  for (const auto& f : hull.facets) apply(f, false);
  return lo <= hi;
}

std::string to_string(const Point& p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t j = 0; j < p.size(); ++j) os << (j ? "," : "") << p[j];
  os << ")";
  return os.str();
}

}  // namespace rclab::geometry
