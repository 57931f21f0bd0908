// Exact convex hulls by the double description method.
//
// Facets of conv(V) for a full-dimensional V ⊂ Q^r are the extreme rays of the
// cone {(a, b) : ⟨a, v⟩ - b ≤ 0 for all v ∈ V}. Lower-dimensional inputs are
// first projected injectively onto a coordinate subspace of their affine hull.

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "rclab/geometry.hpp"

namespace rclab::geometry {
namespace {

class Bitset {
 public:
  explicit Bitset(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= (std::uint64_t{1} << (i % 64)); }
  [[nodiscard]] bool subset_of(const Bitset& other) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if ((words_[w] & ~other.words_[w]) != 0) return false;
    }
    return true;
  }
  [[nodiscard]] Bitset operator&(const Bitset& other) const {
    Bitset out = *this;
    for (std::size_t w = 0; w < words_.size(); ++w) out.words_[w] &= other.words_[w];
    return out;
  }
  [[nodiscard]] int count() const {
    int c = 0;
    for (auto w : words_) c += __builtin_popcountll(w);
    return c;
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct Ray {
  RationalVector w;
  Bitset zeros;
};

void scale_ray(RationalVector& w) {
  Rational m = 0;
  for (const auto& v : w) m = max(m, v.abs());
  if (m.is_zero() || m == Rational(1)) return;
  for (auto& v : w) v /= m;
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero() || b[i].is_zero()) continue;
    s += a[i] * b[i];
  }
  return s;
}

/// Row-reduces `m` in place; returns pivot columns.
std::vector<int> rref(std::vector<RationalVector>& m, int cols) {
  std::vector<int> pivots;
  std::size_t row = 0;
  for (int c = 0; c < cols && row < m.size(); ++c) {
    std::size_t p = row;
    while (p < m.size() && m[p][c].is_zero()) ++p;
    if (p == m.size()) continue;
    std::swap(m[row], m[p]);
    const Rational inv = Rational(1) / m[row][c];
    for (auto& v : m[row]) v *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][c].is_zero()) continue;
      const Rational f = m[r][c];
      for (int k = 0; k < cols; ++k) m[r][k].sub_mul(f, m[row][k]);
    }
    pivots.push_back(c);
    ++row;
  }
  m.resize(row);
  return pivots;
}

/// Inverse of a square nonsingular matrix.
std::vector<RationalVector> inverse(std::vector<RationalVector> a) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    a[i].resize(2 * n, Rational(0));
    a[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c].is_zero()) ++p;
    if (p == n) throw std::logic_error("inverse: singular matrix");
    std::swap(a[c], a[p]);
    const Rational inv = Rational(1) / a[c][c];
    for (auto& v : a[c]) v *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c].is_zero()) continue;
      const Rational f = a[r][c];
      for (std::size_t k = 0; k < 2 * n; ++k) a[r][k].sub_mul(f, a[c][k]);
    }
  }
  std::vector<RationalVector> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i].assign(a[i].begin() + static_cast<std::ptrdiff_t>(n), a[i].end());
  return out;
}

/// Facets (a, b) of conv of full-dimensional points in Q^r, r ≥ 1.
std::vector<Inequality> full_dimensional_facets(const std::vector<RationalVector>& pts, int r) {
  const std::size_t n = pts.size();
  const int cols = r + 1;
  std::vector<RationalVector> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows[i] = pts[i];
    rows[i].push_back(Rational(-1));
  }

  // Pick r + 1 linearly independent rows greedily.
  std::vector<std::size_t> basis;
  std::vector<RationalVector> echelon;
  std::vector<int> echelon_pivot;
  for (std::size_t i = 0; i < n && static_cast<int>(basis.size()) < cols; ++i) {
    RationalVector v = rows[i];
    for (std::size_t e = 0; e < echelon.size(); ++e) {
      const int pc = echelon_pivot[e];
      if (v[pc].is_zero()) continue;
      const Rational f = v[pc];
      for (int k = 0; k < cols; ++k) v[k].sub_mul(f, echelon[e][k]);
    }
    int pc = -1;
    for (int k = 0; k < cols; ++k) {
      if (!v[k].is_zero()) {
        pc = k;
        break;
      }
    }
    if (pc < 0) continue;
    const Rational inv = Rational(1) / v[pc];
    for (auto& x : v) x *= inv;
    echelon.push_back(std::move(v));
    echelon_pivot.push_back(pc);
    basis.push_back(i);
  }
  if (static_cast<int>(basis.size()) != cols) throw std::logic_error("convex hull: input is not full-dimensional");

  std::vector<RationalVector> g0;
  for (auto i : basis) g0.push_back(rows[i]);
  const auto inv = inverse(g0);

  std::vector<Ray> rays;
  for (int c = 0; c < cols; ++c) {
    Ray ray{RationalVector(cols), Bitset(n)};
    for (int k = 0; k < cols; ++k) ray.w[k] = -inv[k][c];
    scale_ray(ray.w);
    for (int b = 0; b < cols; ++b) {
      if (b != c) ray.zeros.set(basis[b]);
    }
    rays.push_back(std::move(ray));
  }

  std::vector<bool> in_basis(n, false);
  for (auto i : basis) in_basis[i] = true;

  for (std::size_t i = 0; i < n; ++i) {
    if (in_basis[i]) continue;
    std::vector<Rational> val(rays.size());
    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t q = 0; q < rays.size(); ++q) {
      val[q] = dot(rows[i], rays[q].w);
      const int s = val[q].sign();
      if (s > 0) {
        pos.push_back(q);
      } else if (s < 0) {
        neg.push_back(q);
      } else {
        rays[q].zeros.set(i);
      }
    }
    if (pos.empty()) continue;

    std::vector<Ray> next;
    for (std::size_t q = 0; q < rays.size(); ++q) {
      if (val[q].sign() <= 0) next.push_back(rays[q]);
    }
    for (auto p : pos) {
      for (auto m : neg) {
        const Bitset common = rays[p].zeros & rays[m].zeros;
        if (common.count() < r - 1) continue;
        bool adjacent = true;
        for (std::size_t q = 0; q < rays.size() && adjacent; ++q) {
          if (q == p || q == m) continue;
          if (common.subset_of(rays[q].zeros)) adjacent = false;
        }
        if (!adjacent) continue;
        Ray ray{RationalVector(cols), common};
        const Rational& vp = val[p];
        const Rational vm = -val[m];
        for (int k = 0; k < cols; ++k) ray.w[k] = vp * rays[m].w[k] + vm * rays[p].w[k];
        scale_ray(ray.w);
        ray.zeros.set(i);
        next.push_back(std::move(ray));
      }
    }
    rays = std::move(next);
  }

  std::vector<Inequality> out;
  out.reserve(rays.size());
  for (auto& ray : rays) {
    Inequality ineq;
    ineq.b = ray.w[r];
    ray.w.pop_back();
    ineq.a = std::move(ray.w);
    out.push_back(ineq.normalized());
  }
  return out;
}

}  // namespace

int affine_dimension(int dim, std::span<const Point> points) {
  if (points.empty()) return -1;
  std::vector<RationalVector> diff;
  for (std::size_t i = 1; i < points.size(); ++i) {
    RationalVector v(dim);
    for (int j = 0; j < dim; ++j) v[j] = points[i][j] - points[0][j];
    diff.push_back(std::move(v));
  }
  return static_cast<int>(rref(diff, dim).size());
}

FacetList convex_hull_facets(int dim, std::span<const Point> points) {
  if (points.empty()) throw std::invalid_argument("convex_hull_facets: empty point set");
  FacetList out;

  std::vector<RationalVector> diff;
  for (std::size_t i = 1; i < points.size(); ++i) {
    RationalVector v(dim);
    for (int j = 0; j < dim; ++j) v[j] = points[i][j] - points[0][j];
    diff.push_back(std::move(v));
  }
  const auto pivots = rref(diff, dim);
  const int r = static_cast<int>(pivots.size());
  out.dim_of_hull = r;

  // Null space of the direction space gives the affine-hull equations.
  std::vector<bool> is_pivot(dim, false);
  for (int c : pivots) is_pivot[c] = true;
  for (int f = 0; f < dim; ++f) {
    if (is_pivot[f]) continue;
    RationalVector e(dim, Rational(0));
    e[f] = 1;
    for (int i = 0; i < r; ++i) e[pivots[i]] = -diff[i][f];
    Inequality eq{e, Rational(0)};
    eq.b = eq.lhs(points[0]);
    out.equations.push_back(eq.normalized());
  }
  if (r == 0) return out;

  std::vector<RationalVector> projected;
  projected.reserve(points.size());
  for (const auto& p : points) {
    RationalVector q(r);
    for (int i = 0; i < r; ++i) q[i] = p[pivots[i]];
    projected.push_back(std::move(q));
  }
  for (auto& f : full_dimensional_facets(projected, r)) {
    Inequality lifted{RationalVector(dim, Rational(0)), f.b};
    for (int i = 0; i < r; ++i) lifted.a[pivots[i]] = f.a[i];
    out.facets.push_back(lifted.normalized());
  }
  std::sort(out.facets.begin(), out.facets.end(), [](const Inequality& x, const Inequality& y) {
    if (x.a != y.a) {
      return std::lexicographical_compare(x.a.begin(), x.a.end(), y.a.begin(), y.a.end(),
                                          [](const Rational& u, const Rational& v) { return u > v; });
    }
    return x.b < y.b;
  });
  return out;
}

FacetList convex_hull_facets(const PointSet& s) { return convex_hull_facets(s.dim(), s.points()); }

}  // namespace rclab::geometry
