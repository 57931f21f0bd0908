#include <chrono>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "rclab/harness.hpp"
#include "rclab/symmetry.hpp"

namespace rclab::harness {

ModelChoice parse_model(const std::string& s) {
  if (s == "compact") return ModelChoice::kCompact;
  if (s == "cut") return ModelChoice::kCut;
  if (s == "colgen") return ModelChoice::kColgen;
  if (s == "hybrid") return ModelChoice::kHybrid;
  throw std::invalid_argument("unknown model '" + s + "'");
}

std::string model_name(ModelChoice m) {
  switch (m) {
    case ModelChoice::kCompact:
      return "compact";
    case ModelChoice::kCut:
      return "cut";
    case ModelChoice::kColgen:
      return "colgen";
    case ModelChoice::kHybrid:
      return "hybrid";
  }
  return "?";
}

std::string setting_key(const RunConfig& cfg) {
  const char* sym = cfg.enh.sym == models::Sym::kNone ? "0" : cfg.enh.sym == models::Sym::kSimple ? "s" : "a";
  return model_name(cfg.model) + "/h" + (cfg.enh.hiding ? "1" : "0") + "/s" + sym + "/p" + (cfg.enh.prop ? "1" : "0");
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::optional<int> to_int(const std::optional<Rational>& v) {
  if (!v) return std::nullopt;
  return static_cast<int>(v->ceil().to_int64());
}

RunStatus status_of(mip::MipStatus s) {
  switch (s) {
    case mip::MipStatus::kOptimal:
      return RunStatus::kOptimal;
    case mip::MipStatus::kInfeasible:
      return RunStatus::kInfeasible;
    case mip::MipStatus::kLimit:
      return RunStatus::kLimit;
  }
  return RunStatus::kLimit;
}

models::EnhancementOptions with_generators(const models::RcInstance& inst, models::EnhancementOptions enh) {
  if (enh.sym == models::Sym::kAdvanced && enh.generators.empty()) {
    enh.generators = symmetry::y_generators(inst.x, inst.y);
  }
  return enh;
}

void solve_matrix_model(const models::RcInstance& inst, const RunConfig& cfg, Report& rep, double seconds,
                        std::optional<int> lower, std::optional<std::vector<Inequality>> start) {
  const auto enh = with_generators(inst, cfg.enh);
  const bool compact = cfg.model != ModelChoice::kCut;
  auto m = compact ? models::build_compact(inst, enh) : models::build_cut_model(inst, enh);
  if (lower) models::add_objective_lower_bound(m, *lower);
  if (start) {
    if (auto x = models::solution_from_inequalities(m, *start)) m.incumbent = std::move(x);
  }
  mip::Options mo;
  mo.limits.time_seconds = std::max(seconds, 0.0);
  mo.limits.nodes = cfg.nodes;
  const auto res = models::solve_model(m, mo);
  rep.status = status_of(res.status);
  rep.node_count += res.node_count;
  rep.lp_count += res.lp_count;
  if (!rep.root_lp) rep.root_lp = res.root_lp;
  rep.value = to_int(res.primal_bound);
  rep.dual_bound = to_int(res.dual_bound);
  if (lower && (!rep.dual_bound || *rep.dual_bound < *lower)) rep.dual_bound = lower;
  if (!res.incumbent.empty()) rep.relaxation = models::extract_relaxation(m, res.incumbent);
}

void verify(const models::RcInstance& inst, const RunConfig& cfg, Report& rep) {
  rep.verified = false;
  if (!rep.value) return;
  if (static_cast<int>(rep.relaxation.size()) != *rep.value) {
    rep.message = "relaxation size differs from the objective value";
    return;
  }
  if (!sep::verify_relaxation(inst.x, inst.y, rep.relaxation, inst.eps)) {
    rep.message = "relaxation does not eps-separate Y from X";
    return;
  }
  if (rep.status == RunStatus::kOptimal && static_cast<int>(inst.y.size()) <= cfg.bruteforce_limit) {
    rep.bruteforce = sep::rc_bruteforce(inst.x, inst.y, inst.eps);
    if (*rep.bruteforce != *rep.value) {
      rep.message = "optimum differs from exhaustive enumeration";
      return;
    }
  }
  rep.verified = true;
}

// "cube-d3-r1" -> "cube-d3", "random2-7" -> "random2".
std::string group_of(const std::string& name) {
  const auto first = name.find('-');
  if (first == std::string::npos) return name;
  const auto second = name.find('-', first + 1);
  const bool dim_tag = first + 2 < name.size() && name[first + 1] == 'd' && std::isdigit(name[first + 2]);
  return dim_tag ? name.substr(0, second) : name.substr(0, first);
}

Report base_report(const InstanceSpec& spec, const RunConfig& cfg) {
  Report rep;
  rep.name = spec.name;
  rep.group = group_of(spec.name);
  rep.setting = setting_key(cfg);
  rep.time_limit = cfg.time_seconds;
  return rep;
}

}  // namespace

Report run_hybrid(const InstanceSpec& spec, const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto inst = to_instance(spec);
  Report rep = base_report(spec, cfg);
  cg::ColgenOptions co;
  co.hiding = cfg.enh.hiding;
  co.limits.time_seconds = cfg.time_seconds;
  const auto rb = cg::root_bounds(inst, co);
  rep.node_count = 1;
  rep.lp_count = rb.lp_count;
  rep.root_lp = rb.lp_value;
  std::optional<std::vector<Inequality>> start;
  if (rb.incumbent) {
    start.emplace();
    for (const auto& c : *rb.incumbent) start->push_back(c.witness);
  }
  RunConfig compact = cfg;
  compact.model = ModelChoice::kCompact;
  const auto root = rep.root_lp;
  solve_matrix_model(inst, compact, rep, cfg.time_seconds - seconds_since(t0), rb.dual_bound, start);
  rep.root_lp = root;
  verify(inst, cfg, rep);
  rep.wall_time = seconds_since(t0);
  return rep;
}

Report run_instance(const InstanceSpec& spec, const RunConfig& cfg) {
  if (cfg.model == ModelChoice::kHybrid) return run_hybrid(spec, cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const auto inst = to_instance(spec);
  Report rep = base_report(spec, cfg);
  if (cfg.model == ModelChoice::kColgen) {
    cg::ColgenOptions co;
    co.hiding = cfg.enh.hiding;
    co.limits.time_seconds = cfg.time_seconds;
    co.limits.nodes = cfg.nodes;
    const auto res = cg::solve_colgen(inst, co);
    rep.status = status_of(res.status);
    rep.value = res.value;
    rep.dual_bound = res.dual_bound;
    rep.root_lp = res.root_lp;
    rep.relaxation = res.relaxation;
    rep.node_count = res.node_count;
    rep.lp_count = res.lp_count;
  } else {
    solve_matrix_model(inst, cfg, rep, cfg.time_seconds, std::nullopt, std::nullopt);
  }
  verify(inst, cfg, rep);
  rep.wall_time = seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::kOptimal:
      return "optimal";
    case RunStatus::kLimit:
      return "limit";
    case RunStatus::kInfeasible:
      return "infeasible";
  }
  return "?";
}

}  // namespace

Json report_to_json(const Report& r) {
  Json j;
  j["name"] = r.name;
  j["group"] = r.group;
  j["setting"] = r.setting;
  j["status"] = status_name(r.status);
  j["rc"] = r.value ? Json(*r.value) : Json(nullptr);
  j["dual_bound"] = r.dual_bound ? Json(*r.dual_bound) : Json(nullptr);
  j["root_lp"] = r.root_lp ? Json(r.root_lp->str()) : Json(nullptr);
  Json ineqs = Json::array();
  for (const auto& q : r.relaxation) {
    Json a = Json::array();
    for (const auto& c : q.a) a.push_back(c.str());
    ineqs.push_back(Json{{"a", a}, {"b", q.b.str()}});
  }
  j["relaxation"] = ineqs;
  j["node_count"] = r.node_count;
  j["lp_count"] = r.lp_count;
  j["wall_time"] = r.wall_time;
  j["time_limit"] = r.time_limit;
  j["verified"] = r.verified;
  j["bruteforce"] = r.bruteforce ? Json(*r.bruteforce) : Json(nullptr);
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

Report report_from_json(const Json& j) {
  Report r;
  try {
    r.name = j.at("name").get<std::string>();
    r.group = j.value("group", std::string());
    r.setting = j.at("setting").get<std::string>();
    const auto st = j.at("status").get<std::string>();
    r.status = st == "optimal" ? RunStatus::kOptimal : st == "infeasible" ? RunStatus::kInfeasible : RunStatus::kLimit;
    if (!j.at("rc").is_null()) r.value = j["rc"].get<int>();
    if (j.contains("dual_bound") && !j["dual_bound"].is_null()) r.dual_bound = j["dual_bound"].get<int>();
    if (j.contains("root_lp") && !j["root_lp"].is_null()) r.root_lp = parse_rational(j["root_lp"].get<std::string>());
    for (const auto& q : j.value("relaxation", Json::array())) {
      Inequality ineq;
      for (const auto& c : q.at("a")) ineq.a.push_back(parse_rational(c.get<std::string>()));
      ineq.b = parse_rational(q.at("b").get<std::string>());
      r.relaxation.push_back(std::move(ineq));
    }
    r.node_count = j.value("node_count", std::int64_t{0});
    r.lp_count = j.value("lp_count", std::int64_t{0});
    r.wall_time = j.value("wall_time", 0.0);
    r.time_limit = j.value("time_limit", 0.0);
    r.verified = j.value("verified", false);
    if (j.contains("bruteforce") && !j["bruteforce"].is_null()) r.bruteforce = j["bruteforce"].get<int>();
    r.message = j.value("message", std::string());
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("report: ") + e.what());
  }
  return r;
}

int exit_code(const Report& r) {
  if (r.value && !r.verified) return 1;
  if (r.status == RunStatus::kLimit && !r.value && !r.dual_bound) return 3;
  return 0;
}

// ---------------------------------------------------------------------------

double sgm(std::span<const double> values, double shift) {
  if (values.empty()) throw std::invalid_argument("sgm: empty list");
  double acc = 0;
  for (double v : values) {
    if (v + shift <= 0) throw std::invalid_argument("sgm: values plus shift must be positive");
    acc += std::log(v + shift);
  }
  return std::exp(acc / static_cast<double>(values.size())) - shift;
}

std::vector<AggregateRow> aggregate(std::span<const Report> reports) {
  std::map<std::pair<std::string, std::string>, std::pair<std::vector<double>, std::vector<double>>> groups;
  std::map<std::pair<std::string, std::string>, AggregateRow> rows;
  for (const auto& r : reports) {
    const auto key = std::make_pair(r.setting, r.group);
    auto& row = rows[key];
    row.setting = r.setting;
    row.group = r.group;
    ++row.total;
    const bool solved = r.status != RunStatus::kLimit;
    if (solved) ++row.solved;
    groups[key].first.push_back(solved ? r.wall_time : std::max(r.wall_time, r.time_limit));
    groups[key].second.push_back(static_cast<double>(r.node_count));
  }
  std::vector<AggregateRow> out;
  for (auto& [key, row] : rows) {
    row.sgm_time = sgm(groups[key].first, 10);
    row.sgm_nodes = sgm(groups[key].second, 100);
    out.push_back(row);
  }
  return out;
}

std::string aggregate_csv(std::span<const AggregateRow> rows) {
  std::string out = "setting,group,solved,sgm_time,sgm_nodes\n";
  char buf[64];
  for (const auto& r : rows) {
    out += r.setting + "," + r.group + "," + std::to_string(r.solved) + ",";
    std::snprintf(buf, sizeof buf, "%.3f,%.1f\n", r.sgm_time, r.sgm_nodes);
    out += buf;
  }
  return out;
}

std::string aggregate_text(std::span<const AggregateRow> rows) {
  std::size_t ws = 7;
  std::size_t wg = 5;
  for (const auto& r : rows) {
    ws = std::max(ws, r.setting.size());
    wg = std::max(wg, r.group.size());
  }
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %-*s  %9s  %10s  %10s\n", static_cast<int>(ws), "setting", static_cast<int>(wg),
                "group", "#solved", "sgm time", "sgm nodes");
  out += buf;
  for (const auto& r : rows) {
    const std::string solved = std::to_string(r.solved) + "/" + std::to_string(r.total);
    std::snprintf(buf, sizeof buf, "%-*s  %-*s  %9s  %10.2f  %10.1f\n", static_cast<int>(ws), r.setting.c_str(),
                  static_cast<int>(wg), r.group.c_str(), solved.c_str(), r.sgm_time, r.sgm_nodes);
    out += buf;
  }
  return out;
}

}  // namespace rclab::harness
