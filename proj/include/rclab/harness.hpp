#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rclab/colgen.hpp"
#include "rclab/matrixmodels.hpp"

namespace rclab::harness {

using geometry::Inequality;
using geometry::PointSet;
using Json = nlohmann::json;

enum class YSource { kExplicit, kL1Radius, kBinaryComplement };

struct InstanceSpec {
  std::string name;
  int dim = 0;
  PointSet x;
  YSource y_source = YSource::kExplicit;
  PointSet y;       // kExplicit
  int radius = 1;   // kL1Radius
  Rational eps{1, 1000};
  std::optional<int> k;
};

/// "p/q" or "p"; throws std::invalid_argument on malformed input.
[[nodiscard]] Rational parse_rational(const std::string& s);

/// Resolves the Y source of an instance to explicit points.
[[nodiscard]] PointSet resolve_y(const InstanceSpec& spec);
[[nodiscard]] models::RcInstance to_instance(const InstanceSpec& spec);

[[nodiscard]] InstanceSpec generate_basic(const std::string& shape, int d, int radius);
/// Down-closed X from an antichain of subsets of {1..d}. Throws on
/// comparable members, entries outside {1..d} or a union that misses a coordinate.
[[nodiscard]] InstanceSpec generate_downcld(int d, const std::vector<std::vector<int>>& antichain, int radius);
/// Sample antichain family: every antichain of {1..d} whose union is {1..d} (d ≤ 4).
[[nodiscard]] std::vector<std::vector<std::vector<int>>> downcld_sample(int d);
/// Lattice points of the hull of a few random points in a small box, with up
/// to `max_y` random nearby points outside.
[[nodiscard]] InstanceSpec generate_random_planar(std::uint32_t seed, int max_y = 10);

/// One 0/1 string of length 2n per line; Y is the binary complement.
[[nodiscard]] InstanceSpec parse_sbox(std::istream& in, const std::string& name);
[[nodiscard]] InstanceSpec read_sbox(const std::string& path);
/// Graph {(x, S(x))} of an n-bit S-box given as a lookup table, as sbox-file lines.
[[nodiscard]] std::vector<std::string> sbox_graph_lines(std::span<const int> table, int n);

[[nodiscard]] Json to_json(const InstanceSpec& spec);
[[nodiscard]] InstanceSpec spec_from_json(const Json& j);
[[nodiscard]] InstanceSpec load_instance(const std::string& path);
void save_instance(const InstanceSpec& spec, const std::string& path);

/// Named suites: "desk" (cube/cross/simplex, d ≤ 3, radius ≤ 2, plus ten
/// random planar sets), "basic" (d ∈ {3,4,5}), "downcld" (d = 3, 4).
[[nodiscard]] std::vector<InstanceSpec> suite(const std::string& name);

enum class ModelChoice { kCompact, kCut, kColgen, kHybrid };

[[nodiscard]] ModelChoice parse_model(const std::string& s);
[[nodiscard]] std::string model_name(ModelChoice m);

struct RunConfig {
  ModelChoice model = ModelChoice::kCompact;
  models::EnhancementOptions enh;
  double time_seconds = 600;
  std::int64_t nodes = -1;
  /// Compare with rc_bruteforce when |Y| ≤ this.
  int bruteforce_limit = 10;
};

/// "model/h{0|1}/s{0|s|a}/p{0|1}".
[[nodiscard]] std::string setting_key(const RunConfig& cfg);

enum class RunStatus { kOptimal, kLimit, kInfeasible };

struct Report {
  std::string name;
  std::string group;
  std::string setting;
  RunStatus status = RunStatus::kLimit;
  std::optional<int> value;
  std::optional<int> dual_bound;
  std::optional<Rational> root_lp;
  std::vector<Inequality> relaxation;
  std::int64_t node_count = 0;
  std::int64_t lp_count = 0;
  double wall_time = 0;
  double time_limit = 0;
  bool verified = false;
  std::optional<int> bruteforce;
  std::string message;
};

/// Solves one instance; throws std::invalid_argument on bad input.
[[nodiscard]] Report run_instance(const InstanceSpec& spec, const RunConfig& cfg);
/// Column generation root bounds handed to the compact model.
[[nodiscard]] Report run_hybrid(const InstanceSpec& spec, const RunConfig& cfg);

[[nodiscard]] Json report_to_json(const Report& r);
[[nodiscard]] Report report_from_json(const Json& j);
/// 0 ok, 1 verification failure, 3 limit without bounds.
[[nodiscard]] int exit_code(const Report& r);

/// (∏ (t_i + shift))^{1/n} - shift; throws on an empty list or t_i + shift ≤ 0.
[[nodiscard]] double sgm(std::span<const double> values, double shift);

struct AggregateRow {
  std::string setting;
  std::string group;
  int solved = 0;
  int total = 0;
  double sgm_time = 0;
  double sgm_nodes = 0;
};

/// Per (setting, group): #solved, sgm(time, 10), sgm(nodes, 100). Unsolved
/// runs count with their time limit. Rows sorted by setting, then group.
[[nodiscard]] std::vector<AggregateRow> aggregate(std::span<const Report> reports);
[[nodiscard]] std::string aggregate_csv(std::span<const AggregateRow> rows);
[[nodiscard]] std::string aggregate_text(std::span<const AggregateRow> rows);

}  // namespace rclab::harness
