#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rclab/geometry.hpp"
#include "rclab/rational.hpp"

namespace rclab::sep {

using geometry::Inequality;
using geometry::Point;
using geometry::PointSet;

/// A set of points that cannot be ε-separated from X by a single inequality.
struct ConflictCertificate {
  PointSet members;
  bool minimal = false;
};

/// ε-separation oracle for a fixed X and ε.
///
/// Solves the feasibility LP over a ∈ [-1,1]^d, b ∈ [-dρ_X, dρ_X] with
/// ⟨a,x⟩ ≤ b on the vertices of conv(X) and ⟨a,y⟩ ≥ b + ε on F.
class Oracle {
 public:
  Oracle(PointSet x, Rational eps);

  [[nodiscard]] const PointSet& x() const { return x_; }
  [[nodiscard]] const Rational& eps() const { return eps_; }
  [[nodiscard]] const Rational& rho_x() const { return rho_x_; }
  [[nodiscard]] const geometry::FacetList& hull() const { return hull_; }
  [[nodiscard]] const std::vector<Point>& vertices() const { return vertices_; }

  [[nodiscard]] std::optional<Inequality> separate(std::span<const Point> f) const;
  [[nodiscard]] bool separable(std::span<const Point> f) const { return separate(f).has_value(); }
  /// Exact re-check of a witness against X and F.
  [[nodiscard]] bool certifies(const Inequality& ineq, std::span<const Point> f) const;

  [[nodiscard]] long calls() const { return calls_; }

 private:
  PointSet x_;
  Rational eps_;
  Rational rho_x_;
  geometry::FacetList hull_;
  std::vector<Point> vertices_;
  mutable long calls_ = 0;
};

[[nodiscard]] std::optional<Inequality> eps_separable(const PointSet& x, std::span<const Point> f, const Rational& eps);

/// Minimal conflict inside F: add points in order until inseparable, then
/// drop every member whose removal keeps the set inseparable.
/// Throws std::invalid_argument when F itself is separable.
[[nodiscard]] ConflictCertificate sparsify_conflict(const Oracle& oracle, std::span<const Point> f);
[[nodiscard]] ConflictCertificate sparsify_conflict(const PointSet& x, std::span<const Point> f, const Rational& eps);

/// Unordered index pairs (i < j) of Y ∩ aff(X) whose segment meets conv(X).
[[nodiscard]] std::vector<std::pair<int, int>> hiding_pair_indices(const PointSet& x, const PointSet& y);
[[nodiscard]] std::vector<std::pair<Point, Point>> hiding_pairs(const PointSet& x, const PointSet& y);

/// H(X, Y) by maximum clique search over the hiding-pair graph.
[[nodiscard]] int max_hiding_set_bruteforce(const PointSet& x, const PointSet& y);

/// Smallest number of ε-separable subsets covering Y (exhaustive; |Y| ≤ ~12).
/// Throws std::invalid_argument when some y ∈ Y is not ε-separable on its own.
[[nodiscard]] int rc_bruteforce(const PointSet& x, const PointSet& y, const Rational& eps);

/// Every ε-separable subset of Y as a bitmask (|Y| ≤ 20).
[[nodiscard]] std::vector<std::uint32_t> separable_subsets(const Oracle& oracle, const PointSet& y);

/// Whether conv(A) ∩ conv(B) ≠ ∅ (exact LP).
[[nodiscard]] bool hulls_intersect(std::span<const Point> a, std::span<const Point> b);

/// Checks ‖a‖∞ ≤ 1, validity on X and that every y ∈ Y violates some
/// inequality by at least ε.
[[nodiscard]] bool verify_relaxation(const PointSet& x, const PointSet& y, std::span<const Inequality> ineqs,
                                     const Rational& eps);

}  // namespace rclab::sep
