#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rclab/geometry.hpp"
#include "rclab/mipcore.hpp"
#include "rclab/separability.hpp"

namespace rclab::models {

using geometry::Inequality;
using geometry::Point;
using geometry::PointSet;

/// Everything the models need about (X, Y, ε).
struct RcInstance {
  PointSet x;
  PointSet y;
  Rational eps;
  int k = 0;
  Rational big_m;
  Rational rho_x;
  Rational rho_y;
  geometry::FacetList facets_of_x;

  [[nodiscard]] int dim() const { return x.dim(); }
};

/// Facets of conv(X) plus both directions of every affine-hull equation.
[[nodiscard]] std::vector<Inequality> outer_description(const geometry::FacetList& hull);

/// Validates X (nonempty, lattice-convex), Y (disjoint from X), ε > 0 and
/// fills ρ_X, ρ_Y, M = d(ρ_X + ρ_Y) + ε and k (default: size of the outer
/// description of conv(X)). Throws std::invalid_argument on bad input.
[[nodiscard]] RcInstance make_instance(PointSet x, PointSet y, Rational eps, std::optional<int> k = std::nullopt);

enum class Sym { kNone, kSimple, kAdvanced };

struct EnhancementOptions {
  bool hiding = false;
  Sym sym = Sym::kNone;
  /// Coordinate-permutation generators for advanced symmetry, as permutations of Y indices.
  std::vector<std::vector<int>> generators;
  /// a-sorting rows a_{i1} ≥ a_{(i+1)1} - 2(u_i - u_{i+1}); implied by Sym::kSimple.
  bool a_sorting = false;
  bool prop = false;
  bool prop_intersection = false;
  bool redundancy_coupling = false;
  /// Heuristic separation of conflict rows at fractional points (cut model).
  bool fractional_conflicts = true;
};

enum class ModelKind { kCompact, kCut };

struct VariableMap {
  int k = 0;
  int d = 0;
  int ny = 0;
  int a0 = -1;
  int b0 = -1;
  int s0 = 0;
  int u0 = 0;

  [[nodiscard]] int a(int i, int j) const { return a0 + i * d + j; }
  [[nodiscard]] int b(int i) const { return b0 + i; }
  [[nodiscard]] int s(int y, int i) const { return s0 + y * k + i; }
  [[nodiscard]] int u(int i) const { return u0 + i; }
  [[nodiscard]] bool is_s(int var) const { return var >= s0 && var < s0 + ny * k; }
  /// (y, i) of an s variable.
  [[nodiscard]] std::pair<int, int> s_index(int var) const { return {(var - s0) / k, (var - s0) % k}; }
};

struct BuiltModel {
  ModelKind kind = ModelKind::kCompact;
  std::shared_ptr<const RcInstance> inst;
  mip::Model model;
  VariableMap vars;
  std::vector<std::shared_ptr<mip::Propagator>> propagators;
  std::vector<std::shared_ptr<mip::Separator>> separators;
  std::optional<std::vector<Rational>> incumbent;
};

/// Compact big-M model. Throws std::invalid_argument for the forbidden
/// combination of advanced symmetry and a-sorting rows.
[[nodiscard]] BuiltModel build_compact(const RcInstance& inst, const EnhancementOptions& opts);
/// Cutting-plane model over s and u with lazily separated conflict rows.
[[nodiscard]] BuiltModel build_cut_model(const RcInstance& inst, const EnhancementOptions& opts);

/// Model solution for a list of at most k inequalities (s from the violation
/// pattern at margin ε); nothing if some y is not cut or the list is too long.
[[nodiscard]] std::optional<std::vector<Rational>> solution_from_inequalities(const BuiltModel& m,
                                                                             std::vector<Inequality> ineqs);

/// Adds a lower bound row Σ u_i ≥ bound.
void add_objective_lower_bound(BuiltModel& m, int bound);

[[nodiscard]] mip::MipResult solve_model(const BuiltModel& m, mip::Options opts = {});

/// Inequalities of an optimal solution: compact reads off the rows with
/// u_i = 1, cut asks the oracle for a witness per used index.
[[nodiscard]] std::vector<Inequality> extract_relaxation(const BuiltModel& m, std::span<const Rational> x);

// ---- plugin operations, exposed for testing ----

struct ConflictRow {
  std::vector<int> members;  // indices into Y
};

/// Conflicts of an integral s matrix (one sparsified conflict per inseparable F_i).
[[nodiscard]] std::vector<ConflictRow> separate_conflicts_integral(const sep::Oracle& oracle, const PointSet& y,
                                                                   const std::vector<std::vector<int>>& sets);
/// Greedy heuristic: per column, add points by non-increasing s* while the row stays violated.
[[nodiscard]] std::vector<ConflictRow> separate_conflicts_fractional(const sep::Oracle& oracle, const PointSet& y,
                                                                     const std::vector<std::vector<Rational>>& s_star);

/// Hiding pair rows Σ_{y∈H} s_{yi} ≤ 1 violated by s*, as (pair index, i).
[[nodiscard]] std::vector<std::pair<int, int>> violated_hiding_cuts(const std::vector<std::pair<int, int>>& pairs,
                                                                    const std::vector<std::vector<Rational>>& s_star);

struct ConvexityOutcome {
  bool cutoff = false;
  std::vector<int> fix_one;   // y indices to fix to 1
  std::vector<int> fix_zero;  // y indices to fix to 0 (intersection test)
};

/// Given F_i (fixed to 1), fixed-zero and free point indices of one column.
[[nodiscard]] ConvexityOutcome convexity_propagate(const RcInstance& inst, const std::vector<int>& fixed_one,
                                                   const std::vector<int>& fixed_zero, const std::vector<int>& free,
                                                   bool intersection);

}  // namespace rclab::models
