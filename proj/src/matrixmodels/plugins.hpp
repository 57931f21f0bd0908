#pragma once

#include <map>
#include <memory>
#include <set>
#include <vector>

#include "rclab/matrixmodels.hpp"
#include "rclab/mipcore.hpp"

namespace rclab::models::detail {

/// Cached separability tests on subsets of Y given by sorted indices.
class SetTester {
 public:
  SetTester(const sep::Oracle& oracle, const PointSet& y) : oracle_(oracle), y_(y) {}
  bool separable(const std::vector<int>& members);
  /// Minimal conflict inside an inseparable set, as indices into Y.
  std::vector<int> sparsify(const std::vector<int>& members);

 private:
  const sep::Oracle& oracle_;
  const PointSet& y_;
  std::map<std::vector<int>, bool> cache_;
};

std::vector<ConflictRow> conflicts_integral(SetTester& t, const std::vector<std::vector<int>>& sets);
std::vector<ConflictRow> conflicts_fractional(SetTester& t, const std::vector<std::vector<Rational>>& s_star);

/// Per-column values s*[i][y].
std::vector<std::vector<Rational>> s_matrix(const VariableMap& v, std::span<const Rational> x);

class ConflictSeparator : public mip::Separator {
 public:
  ConflictSeparator(std::shared_ptr<const RcInstance> inst, VariableMap vars, bool fractional);
  int separate(mip::Solver& s, std::span<const Rational> x) override;
  mip::CheckResult check(mip::Solver& s, std::span<const Rational> x) override;

  [[nodiscard]] std::size_t pool_size() const { return pool_.size(); }

 private:
  int add_rows(mip::Solver& s, const std::vector<ConflictRow>& rows);

  std::shared_ptr<const RcInstance> inst_;
  VariableMap v_;
  bool fractional_;
  sep::Oracle oracle_;
  SetTester tester_;
  std::set<std::vector<int>> pool_;
};

class HidingSeparator : public mip::Separator {
 public:
  HidingSeparator(std::vector<std::pair<int, int>> pairs, VariableMap vars)
      : pairs_(std::move(pairs)), v_(vars) {}
  int separate(mip::Solver& s, std::span<const Rational> x) override;

 private:
  std::vector<std::pair<int, int>> pairs_;
  VariableMap v_;
};

class ConvexityPropagator : public mip::Propagator {
 public:
  ConvexityPropagator(std::shared_ptr<const RcInstance> inst, VariableMap vars, bool intersection)
      : inst_(std::move(inst)), v_(vars), intersection_(intersection) {}
  mip::PropStatus propagate(mip::Solver& s) override;

 private:
  std::shared_ptr<const RcInstance> inst_;
  VariableMap v_;
  bool intersection_;
};

/// v ⪰_lex w constraints on binary variables: propagation plus cover cuts.
class LexPlugin : public mip::Propagator, public mip::Separator {
 public:
  explicit LexPlugin(std::vector<std::pair<std::vector<int>, std::vector<int>>> pairs) : pairs_(std::move(pairs)) {}
  mip::PropStatus propagate(mip::Solver& s) override;
  int separate(mip::Solver& s, std::span<const Rational> x) override;

 private:
  std::vector<std::pair<std::vector<int>, std::vector<int>>> pairs_;
};

}  // namespace rclab::models::detail
