#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rclab/matrixmodels.hpp"

namespace rclab::cg {

using geometry::Inequality;
using geometry::Point;
using geometry::PointSet;

/// A separable subset of Y (sorted indices) with its witness inequality.
struct Column {
  std::vector<int> members;
  Inequality witness;
  int id = -1;
};

enum class RfMode { kDiffer, kTogether };

/// Ryan–Foster decision on two indices of Y.
struct RfDecision {
  int y1 = 0;
  int y2 = 0;
  RfMode mode = RfMode::kDiffer;
};

/// Whether a member set is compatible with a decision.
[[nodiscard]] bool allows(const RfDecision& d, std::span<const int> members);
[[nodiscard]] bool allows_all(std::span<const RfDecision> ds, std::span<const int> members);

/// Facet-induced sets (shrunk to their ε-separated part) plus all singletons,
/// deduplicated. Throws std::invalid_argument if a singleton is not ε-separable.
[[nodiscard]] std::vector<Column> initial_columns(const models::RcInstance& inst);

/// θ(z) = 1/2 - min(z, 1 - z).
[[nodiscard]] Rational fractionality(const Rational& z);

/// The fractional pair (I, J) with I ∩ J ≠ ∅, I Δ J ≠ ∅ maximizing θ(I) + θ(J)
/// (ties: smallest ids), its points y1 ∈ I ∩ J, y2 ∈ I Δ J (smallest indices)
/// and the children {differ, together}. Nothing if no such pair exists.
struct RfChoice {
  int col_i = -1;
  int col_j = -1;
  RfDecision differ;
  RfDecision together;
};
[[nodiscard]] std::optional<RfChoice> ryan_foster_select(std::span<const Rational> z, std::span<const Column> pool);

/// Columns of the pool that stay enabled under the decisions.
[[nodiscard]] std::vector<int> enabled_columns(std::span<const Column> pool, std::span<const RfDecision> ds);

struct PricingOptions {
  bool hiding = false;
  double time_seconds = 600;
};

struct PricingResult {
  std::optional<Column> column;
  Rational value;
  bool complete = true;
};

/// Maximum-weight ε-separable subset of Y obeying the decisions, returned
/// only if its weight exceeds `threshold`. Weights must be nonnegative.
[[nodiscard]] PricingResult price(const models::RcInstance& inst, const sep::Oracle& oracle,
                                  std::span<const Rational> weights, std::span<const RfDecision> ds,
                                  const Rational& threshold, const PricingOptions& opts = {});

struct ColgenOptions {
  bool hiding = false;
  mip::Limits limits;
  /// Stop after the root node.
  bool root_only = false;
  /// Called with the master solution and the pool before every branching.
  std::function<void(std::span<const Rational>, std::span<const Column>)> on_branch;
};

struct ColgenResult {
  mip::MipStatus status = mip::MipStatus::kLimit;
  std::optional<int> value;
  std::optional<int> dual_bound;
  /// Master LP value at the root after pricing converged.
  std::optional<Rational> root_lp;
  std::vector<Column> solution;
  std::vector<Inequality> relaxation;
  std::int64_t node_count = 0;
  std::int64_t lp_count = 0;
  std::int64_t columns = 0;
  double wall_time = 0;
};

/// Branch-and-price on the set covering master.
[[nodiscard]] ColgenResult solve_colgen(const models::RcInstance& inst, const ColgenOptions& opts = {});

struct RootBounds {
  std::optional<int> dual_bound;
  std::optional<Rational> lp_value;
  std::optional<std::vector<Column>> incumbent;
  std::int64_t lp_count = 0;
  double wall_time = 0;
};

/// Root master LP after pricing converged: ceil of its value and a greedy
/// cover over the generated columns.
[[nodiscard]] RootBounds root_bounds(const models::RcInstance& inst, const ColgenOptions& opts = {});

/// Greedy set cover over the pool (largest uncovered count, then smallest id).
[[nodiscard]] std::optional<std::vector<int>> greedy_cover(int ny, std::span<const Column> pool);

}  // namespace rclab::cg
