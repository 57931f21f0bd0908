#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rclab/rational.hpp"

namespace rclab::lp {

enum class Sense { kMinimize, kMaximize };
enum class RowType { kLessEqual, kEqual, kGreaterEqual };
enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct Term {
  int var = 0;
  Rational coef;
};

/// Σ coef·x  (≤ | = | ≥)  rhs, stored sparse.
struct Row {
  std::vector<Term> terms;
  RowType type = RowType::kLessEqual;
  Rational rhs;

  [[nodiscard]] Rational activity(std::span<const Rational> x) const;
};

struct LinearProgram {
  int num_vars = 0;
  Sense sense = Sense::kMinimize;
  std::vector<Rational> objective;
  std::vector<std::optional<Rational>> lower;
  std::vector<std::optional<Rational>> upper;
  std::vector<Row> rows;

  /// Appends a variable and returns its index.
  int add_variable(Rational cost, std::optional<Rational> lo, std::optional<Rational> hi);
  /// Appends a row and returns its index.
  int add_row(std::vector<Term> terms, RowType type, Rational rhs);
  /// Dense convenience overload; zero coefficients are dropped.
  int add_dense_row(std::span<const Rational> coefs, RowType type, Rational rhs);
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<Rational> primal;
  /// Row duals when optimal (sign convention of the problem's own sense);
  /// row multipliers of a Farkas certificate when infeasible.
  std::vector<Rational> duals;
  std::vector<Rational> reduced_costs;
  /// Improving direction when unbounded.
  std::vector<Rational> ray;
  Rational objective_value;
  std::int64_t pivots = 0;
};

/// Exact optimum with certificates, or an infeasibility / unboundedness verdict.
[[nodiscard]] LpSolution solve(const LinearProgram& lp);

/// Checks an optimal solution exactly: primal and dual feasibility,
/// complementary slackness and equal objective values. Returns an empty string
/// when the certificate holds, otherwise a description of the first failure.
[[nodiscard]] std::string check_optimality(const LinearProgram& lp, const LpSolution& sol);

/// Checks that `multipliers` prove infeasibility: the combination Σ y_i (row_i)
/// cannot attain its required value under the variable bounds and row senses.
[[nodiscard]] bool check_farkas(const LinearProgram& lp, std::span<const Rational> multipliers);

/// Incremental bounded simplex over exact rationals.
///
/// Every constraint row i is written as ⟨a_i, x⟩ - s_i = 0 with a logical
/// variable s_i carrying the row bounds. Only basic structural variables keep
/// a stored tableau row; the row of a basic logical is rebuilt from a_i on
/// demand and its value is kept as the row activity. Bound changes, added
/// rows and added columns all warm start: bound changes keep dual feasibility
/// (dual simplex), added columns keep primal feasibility (primal simplex). A
/// start that is neither is handled by temporarily shifting costs, running the
/// dual simplex to primal feasibility and finishing with the primal simplex.
class Simplex {
 public:
  explicit Simplex(const LinearProgram& lp);

  [[nodiscard]] int num_vars() const { return static_cast<int>(struct_col_.size()); }
  [[nodiscard]] int num_rows() const { return static_cast<int>(logical_col_.size()); }

  void set_bounds(int var, std::optional<Rational> lo, std::optional<Rational> hi);
  [[nodiscard]] const std::optional<Rational>& lower(int var) const;
  [[nodiscard]] const std::optional<Rational>& upper(int var) const;
  void set_cost(int var, Rational cost);

  int add_row(const Row& row);
  /// Removes rows (indices refer to the current numbering); later rows shift down.
  void remove_rows(std::vector<int> rows);
  /// Appends a column with entries (row, coefficient); returns the variable index.
  int add_column(Rational cost, std::optional<Rational> lo, std::optional<Rational> hi, std::span<const Term> entries);

  LpStatus solve(std::int64_t max_pivots = 50'000'000);

  [[nodiscard]] LpStatus status() const { return status_; }
  [[nodiscard]] Rational objective() const;
  [[nodiscard]] Rational value(int var) const;
  [[nodiscard]] std::vector<Rational> primal() const;
  [[nodiscard]] std::vector<Rational> row_duals() const;
  [[nodiscard]] std::vector<Rational> reduced_costs() const;
  [[nodiscard]] std::vector<Rational> row_activities() const;
  /// Farkas multipliers after an infeasible solve.
  [[nodiscard]] const std::vector<Rational>& farkas() const { return farkas_; }
  [[nodiscard]] const std::vector<Rational>& ray() const { return ray_; }
  [[nodiscard]] std::int64_t pivots() const { return pivots_; }

 private:
  enum class Status : std::uint8_t { kBasic, kAtLower, kAtUpper, kZero, kDead };

  struct Column {
    std::optional<Rational> lo;
    std::optional<Rational> hi;
    Rational cost;
    Status status = Status::kAtLower;
    int position = -1;  // stored row of a basic structural
    int row = -1;       // constraint index of a logical
  };

  using SparseRow = std::vector<std::pair<int, Rational>>;

  [[nodiscard]] bool is_logical(int col) const { return cols_[col].row >= 0; }
  [[nodiscard]] Rational nonbasic_value(int col) const;
  [[nodiscard]] Rational current_value(int col) const;
  [[nodiscard]] static const Rational* entry(const SparseRow& row, int col);
  [[nodiscard]] SparseRow logical_row(int row) const;
  [[nodiscard]] SparseRow tableau_row(int col) const;
  void shift_activity(int col, const Rational& delta);
  void place_nonbasic(int col);
  void recompute_basic_values();
  void recompute_reduced_costs();
  void rebuild_columns();
  [[nodiscard]] bool dual_feasible(int col) const;
  [[nodiscard]] bool primal_feasible() const;
  void pivot(int leaving, int entering, const SparseRow& prow);
  LpStatus dual_simplex(std::int64_t max_pivots);
  LpStatus primal_simplex(std::int64_t max_pivots);
  void build_farkas(int leaving, const SparseRow& prow);

  std::vector<Column> cols_;
  std::vector<int> struct_col_;
  std::vector<int> logical_col_;
  std::vector<SparseRow> arow_;  // constraint rows over structural columns
  std::vector<std::vector<std::pair<int, Rational>>> acol_;  // per structural column: (row, coefficient)
  std::vector<int> basic_;       // basic structural of each stored row
  std::vector<SparseRow> tab_;   // x_B + Σ α x_N = 0
  std::vector<Rational> xb_;
  std::vector<Rational> act_;    // row activities ⟨a_i, x⟩
  std::vector<Rational> d_;      // reduced cost per column (0 for basic)
  bool maximize_ = false;
  LpStatus status_ = LpStatus::kIterationLimit;
  std::vector<Rational> farkas_;
  std::vector<Rational> ray_;
  std::int64_t pivots_ = 0;
};

}  // namespace rclab::lp
