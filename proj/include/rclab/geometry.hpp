#pragma once

#include <cstdint>
#include <initializer_list>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rclab/rational.hpp"

namespace rclab::geometry {

/// A lattice point. Its length is the ambient dimension.
using Point = std::vector<std::int64_t>;
using RationalVector = std::vector<Rational>;

/// Ordered set of distinct lattice points of a common dimension.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(int dim) : dim_(dim) {}
  PointSet(int dim, std::vector<Point> points);
  PointSet(int dim, std::initializer_list<Point> points) : PointSet(dim, std::vector<Point>(points)) {}

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] bool empty() const { return points_.empty(); }
  [[nodiscard]] const Point& operator[](std::size_t i) const { return points_[i]; }
  [[nodiscard]] const std::vector<Point>& points() const { return points_; }
  [[nodiscard]] auto begin() const { return points_.begin(); }
  [[nodiscard]] auto end() const { return points_.end(); }

  [[nodiscard]] bool contains(const Point& p) const { return index_.contains(p); }
  /// Position of `p`, or -1.
  [[nodiscard]] int index_of(const Point& p) const;
  /// Appends `p`; throws on a dimension mismatch or a duplicate.
  void add(Point p);

  friend bool operator==(const PointSet& a, const PointSet& b) { return a.dim_ == b.dim_ && a.points_ == b.points_; }

 private:
  int dim_ = 0;
  std::vector<Point> points_;
  std::set<Point> index_;
};

/// ⟨a, x⟩ ≤ b with ‖a‖∞ ≤ 1 once normalized.
struct Inequality {
  RationalVector a;
  Rational b;

  [[nodiscard]] Rational lhs(const Point& x) const;
  [[nodiscard]] Rational lhs(std::span<const Rational> x) const;
  /// Scales by 1/‖a‖∞ (no-op for a = 0).
  [[nodiscard]] Inequality normalized() const;
  [[nodiscard]] Rational sup_norm() const;
  [[nodiscard]] std::string str() const;

  friend bool operator==(const Inequality&, const Inequality&) = default;
};

/// Outer description of conv(S): facet inequalities plus the affine-hull
/// equations ⟨a, x⟩ = b when S is not full-dimensional.
struct FacetList {
  std::vector<Inequality> facets;
  std::vector<Inequality> equations;
  int dim_of_hull = -1;

  [[nodiscard]] bool contains(const Point& x) const;
  [[nodiscard]] bool contains(std::span<const Rational> x) const;
};

/// Exact, irredundant facets of conv(S) (double description on the affine hull).
[[nodiscard]] FacetList convex_hull_facets(const PointSet& s);
[[nodiscard]] FacetList convex_hull_facets(int dim, std::span<const Point> points);

/// Affine dimension of the points; -1 for an empty set.
[[nodiscard]] int affine_dimension(int dim, std::span<const Point> points);

/// True iff every integer point of conv(S) lies in S.
[[nodiscard]] bool is_lattice_convex(const PointSet& s);

/// Integer points of Z^d \ X within ℓ1 distance `radius` of X, in lexicographic order.
[[nodiscard]] PointSet l1_neighborhood(const PointSet& x, int radius);

/// max ‖p‖∞ over S.
[[nodiscard]] Rational linf_radius(const PointSet& s);

/// Whether conv({y1, y2}) meets the polytope described by `hull`.
[[nodiscard]] bool segment_hits_hull(const Point& y1, const Point& y2, const FacetList& hull);

/// Integer points in the box [lo, hi] satisfying the description.
[[nodiscard]] PointSet integer_points_in_hull(const FacetList& hull, const Point& lo, const Point& hi);

/// Componentwise bounding box of a nonempty set.
[[nodiscard]] std::pair<Point, Point> bounding_box(const PointSet& s);

/// Whether `p` lies in aff(S) given the hull description of S.
[[nodiscard]] bool in_affine_hull(const Point& p, const FacetList& hull);

[[nodiscard]] std::string to_string(const Point& p);

}  // namespace rclab::geometry
