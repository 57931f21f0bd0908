#pragma once

#include <any>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rclab/exactlp.hpp"
#include "rclab/rational.hpp"

namespace rclab::mip {

class Solver;

/// Mixed-integer program: an LP plus integrality flags. Integer variables are
/// binary or nonnegative without upper bound; only binaries are propagated.
struct Model {
  lp::LinearProgram lp;
  std::vector<bool> integer;
  /// Every feasible solution has an integral objective value, so LP bounds
  /// may be rounded.
  bool objective_integral = false;

  int add_variable(Rational cost, std::optional<Rational> lo, std::optional<Rational> hi, bool is_integer);
  int add_binary(Rational cost) { return add_variable(std::move(cost), Rational(0), Rational(1), true); }
  int add_row(std::vector<lp::Term> terms, lp::RowType type, Rational rhs) {
    return lp.add_row(std::move(terms), type, std::move(rhs));
  }
};

struct BoundChange {
  int var = 0;
  Rational lo;
  Rational hi;
};

/// One child produced by a branching rule.
struct Child {
  std::vector<BoundChange> bounds;
  std::vector<lp::Row> rows;
  /// Replaces the inherited payload when set.
  std::any payload;
  int branch_var = -1;
};

enum class PropStatus { kUnchanged, kReduced, kCutoff };

class Propagator {
 public:
  virtual ~Propagator() = default;
  virtual PropStatus propagate(Solver& s) = 0;
};

enum class CheckResult { kFeasible, kRowsAdded, kInfeasible };

class Separator {
 public:
  virtual ~Separator() = default;
  /// Adds rows violated by `x`; returns how many.
  virtual int separate(Solver& s, std::span<const Rational> x) = 0;
  /// Feasibility check of an integral LP solution. A separator that rejects
  /// the point must either add a violated row or declare the node infeasible.
  virtual CheckResult check(Solver& /*s*/, std::span<const Rational> /*x*/) { return CheckResult::kFeasible; }
};

class Pricer {
 public:
  virtual ~Pricer() = default;
  /// Called whenever a node becomes active, before propagation.
  virtual void activate(Solver& /*s*/) {}
  /// Adds columns with negative reduced cost for the given row duals and
  /// returns how many; negative when pricing stopped without a verdict.
  virtual int price(Solver& s, std::span<const Rational> duals) = 0;
  /// Adds columns that invalidate the Farkas proof of an infeasible LP.
  virtual int price_infeasible(Solver& s, std::span<const Rational> farkas) = 0;
};

class BranchingRule {
 public:
  virtual ~BranchingRule() = default;
  /// Children of the current node, or nothing to defer to the next rule.
  virtual std::optional<std::vector<Child>> branch(Solver& s, std::span<const Rational> x) = 0;
};

/// Index of the integer variable maximizing min(f, 1 - f); ties go to the
/// lowest index; -1 when all integer variables are integral.
[[nodiscard]] int most_fractional(std::span<const Rational> x, const std::vector<bool>& integer);

/// Default rule: most fractional variable, up child first.
class MostFractionalBranching : public BranchingRule {
 public:
  std::optional<std::vector<Child>> branch(Solver& s, std::span<const Rational> x) override;
};

enum class MipStatus { kOptimal, kInfeasible, kLimit };

struct Limits {
  double time_seconds = 600;
  std::int64_t nodes = -1;  // no limit when negative
};

struct Options {
  Limits limits;
  int propagation_rounds = 10;
  int separation_rounds_root = 50;
  int separation_rounds = 10;
  /// Nodes whose bound cannot beat this value are pruned (same sense as the objective).
  std::optional<Rational> objective_limit;
  bool stop_at_first_solution = false;
  /// Records (node, parent, bound) for every processed node.
  bool trace_bounds = false;
};

struct NodeTrace {
  int id = 0;
  int parent = -1;
  Rational bound;
};

struct MipResult {
  MipStatus status = MipStatus::kLimit;
  std::vector<Rational> incumbent;
  std::optional<Rational> primal_bound;
  std::optional<Rational> dual_bound;
  std::int64_t node_count = 0;
  std::int64_t lp_count = 0;
  std::int64_t pivots = 0;
  double wall_time = 0;
  std::optional<Rational> root_lp;
  std::vector<NodeTrace> trace;
};

/// Branch-and-bound over a Model with exact LP bounds.
class Solver {
 public:
  explicit Solver(Model model, Options options = {});
  ~Solver();
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  void register_propagator(std::shared_ptr<Propagator> p);
  void register_separator(std::shared_ptr<Separator> p);
  /// Throws std::logic_error on a second pricer.
  void register_pricer(std::shared_ptr<Pricer> p);
  void register_branching(std::shared_ptr<BranchingRule> p);

  /// Installs a starting solution; returns false if it is infeasible for the
  /// model rows and bounds (it is then ignored).
  bool set_incumbent(std::vector<Rational> x);

  MipResult solve();

  // ---- plugin interface, valid during solve() ----
  [[nodiscard]] const Model& model() const { return model_; }
  [[nodiscard]] int num_vars() const { return model_.lp.num_vars; }
  [[nodiscard]] const Rational& lower(int var) const { return lo_[var]; }
  [[nodiscard]] const Rational& upper(int var) const { return hi_[var]; }
  [[nodiscard]] bool has_lower(int var) const { return has_lo_[var]; }
  [[nodiscard]] bool has_upper(int var) const { return has_hi_[var]; }
  [[nodiscard]] bool is_fixed(int var) const { return has_lo_[var] && has_hi_[var] && lo_[var] == hi_[var]; }
  /// Tightens local bounds; returns false if the domain becomes empty.
  bool tighten(int var, const Rational& lo, const Rational& hi);
  bool fix(int var, const Rational& value) { return tighten(var, value, value); }

  /// Adds a row. Global rows join the model for the rest of the search;
  /// local rows apply to the current subtree only.
  void add_row(lp::Row row, bool global = true);
  /// Adds a column (only meaningful from a pricer); `entries` index rows in
  /// model order. Returns the variable index.
  int add_column(Rational cost, Rational lo, std::optional<Rational> hi, std::span<const lp::Term> entries,
                 bool is_integer);
  [[nodiscard]] int num_rows() const { return static_cast<int>(model_.lp.rows.size()); }

  [[nodiscard]] int node_id() const { return current_id_; }
  [[nodiscard]] int node_depth() const { return current_depth_; }
  /// Variable fixed by the branching that created the current node, or -1.
  [[nodiscard]] int branched_var() const { return current_branch_var_; }
  [[nodiscard]] const std::any& payload() const { return current_payload_; }
  [[nodiscard]] const std::vector<Rational>& lp_values() const { return lp_x_; }
  [[nodiscard]] const std::optional<Rational>& incumbent_value() const { return incumbent_value_; }
  [[nodiscard]] const std::vector<Rational>& incumbent() const { return incumbent_; }
  [[nodiscard]] const Options& options() const { return options_; }
  [[nodiscard]] double remaining_seconds() const;

 private:
  struct Node;

  enum class NodeOutcome { kPruned, kBranched, kSolution, kTimeout };
  enum class LpOutcome { kOptimal, kInfeasible, kIncomplete };

  bool linear_propagation();
  bool propagate_node();
  void activate(const Node& node);
  NodeOutcome process(Node& node, std::vector<std::unique_ptr<Node>>& children);
  LpOutcome solve_lp_with_pricing(Rational& bound);
  bool feasible_point(std::span<const Rational> x) const;
  [[nodiscard]] bool can_improve(const Rational& bound) const;
  [[nodiscard]] Rational round_bound(const Rational& v) const;
  void sync_bounds();
  void rebuild_model_to_simplex();
  bool time_up() const;

  Model model_;
  Options options_;
  std::vector<std::shared_ptr<Propagator>> propagators_;
  std::vector<std::shared_ptr<Separator>> separators_;
  std::shared_ptr<Pricer> pricer_;
  std::vector<std::shared_ptr<BranchingRule>> branching_;

  std::unique_ptr<lp::Simplex> simplex_;
  std::vector<int> row_map_;  // simplex row -> model row, or -(local id + 1)
  std::vector<int> model_to_simplex_;

  std::vector<Rational> global_lo_, global_hi_, lo_, hi_;
  std::vector<bool> has_lo_, has_hi_;
  std::vector<Rational> lp_x_;
  std::vector<Rational> incumbent_;
  std::optional<Rational> incumbent_value_;
  std::vector<std::pair<int, lp::Row>> current_local_rows_;
  int next_local_id_ = 0;
  int next_node_id_ = 0;
  std::int64_t solutions_found_ = 0;
  bool last_propagation_changed_ = false;
  std::optional<Rational> root_lp_;
  std::vector<NodeTrace> trace_;
  int current_id_ = -1;
  int current_depth_ = 0;
  int current_branch_var_ = -1;
  std::any current_payload_;
  bool maximize_ = false;
  std::int64_t lp_count_ = 0;
  std::chrono::steady_clock::time_point start_;
};

/// Fixings implied by v ⪰_lex w for binary vectors given current bounds.
struct LexFixings {
  bool infeasible = false;
  std::vector<std::pair<int, int>> fixings;  // (variable, value)
};

/// Symresack-style propagation: walks positions left to right while both
/// entries are fixed and equal; at the first open position applies
/// v_i ≥ w_i and forces v_i > w_i when a tie cannot be completed.
[[nodiscard]] LexFixings lex_ge_propagate(std::span<const int> v, std::span<const int> w,
                                          std::span<const Rational> lo, std::span<const Rational> hi);

/// Most violated minimal cover inequality of v ⪰_lex w at a fractional point:
/// for a position i, Σ_{j<i} min(v_j, 1 - w_j) + v_i + 1 - w_i ≥ 1.
[[nodiscard]] std::optional<lp::Row> lex_ge_cover_cut(std::span<const int> v, std::span<const int> w,
                                                      std::span<const Rational> x);

}  // namespace rclab::mip
