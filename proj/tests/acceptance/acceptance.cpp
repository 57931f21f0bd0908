// One PASS/FAIL line per criterion. Usage: rc_acceptance [criterion...]

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rclab/colgen.hpp"
#include "rclab/harness.hpp"
#include "rclab/symmetry.hpp"
#include "rf_check.hpp"

using namespace rclab;
using geometry::PointSet;
using harness::InstanceSpec;
using harness::ModelChoice;
using harness::Report;
using harness::RunConfig;
using harness::RunStatus;

namespace {

const Rational kEps(1, 1000);

// Per-run limits in seconds.
constexpr double kDeskLimit = 90;
constexpr double kEnhancementLimit = 5;
constexpr double kSymmetryLimit = 60;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::string bounds_of(const Report& r) {
  const auto show = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string("?"); };
  return "[" + show(r.dual_bound) + "," + show(r.value) + "]";
}

const std::vector<InstanceSpec>& desk() {
  static const auto specs = harness::suite("desk");
  return specs;
}

// t + Δ₂ with t = (1, 2).
PointSet translated_simplex() { return PointSet(2, {{1, 2}, {2, 2}, {1, 3}}); }

InstanceSpec explicit_spec(const std::string& name, const PointSet& x, const PointSet& y) {
  InstanceSpec s;
  s.name = name;
  s.dim = x.dim();
  s.x = x;
  s.y = y;
  return s;
}

// ---------------------------------------------------------------------------

std::vector<Report> g_desk_runs;
double g_desk_seconds = 0;
std::vector<Report> g_enhancement_runs;

void run_desk() {
  if (!g_desk_runs.empty()) return;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& spec : desk()) {
    for (auto m : {ModelChoice::kColgen, ModelChoice::kHybrid, ModelChoice::kCompact, ModelChoice::kCut}) {
      RunConfig cfg;
      cfg.model = m;
      cfg.time_seconds = kDeskLimit;
      if (m == ModelChoice::kCompact || m == ModelChoice::kCut) {
        cfg.enh.hiding = true;
        cfg.enh.sym = m == ModelChoice::kCompact ? models::Sym::kAdvanced : models::Sym::kSimple;
      }
      g_desk_runs.push_back(harness::run_instance(spec, cfg));
    }
  }
  g_desk_seconds = since(t0);
}

Outcome criterion_1() {
  run_desk();
  std::map<std::string, std::vector<const Report*>> by_instance;
  for (const auto& r : g_desk_runs) by_instance[r.name].push_back(&r);
  int optimal = 0;
  std::vector<std::string> problems;
  for (const auto& [name, runs] : by_instance) {
    std::set<int> values;
    for (const auto* r : runs) {
      if (r->status != RunStatus::kOptimal) {
        problems.push_back(r->setting + " " + name + " limit " + bounds_of(*r));
        continue;
      }
      ++optimal;
      values.insert(*r->value);
      if (r->bruteforce && *r->bruteforce != *r->value) {
        problems.push_back(r->setting + " " + name + " differs from brute force");
      }
    }
    if (values.size() > 1) problems.push_back(name + ": models disagree");
  }
  Outcome o;
  o.pass = problems.empty() && g_desk_seconds < 600;
  o.detail = std::to_string(optimal) + "/" + std::to_string(g_desk_runs.size()) + " runs optimal, " +
             fmt(g_desk_seconds) + " s";
  for (const auto& p : problems) o.detail += "; " + p;
  return o;
}

Outcome criterion_2() {
  int cut_checked = 0;
  int compact_checked = 0;
  std::vector<std::string> problems;
  mip::Options root;
  root.limits.nodes = 1;
  root.limits.time_seconds = 120;
  for (const auto& spec : desk()) {
    const auto inst = harness::to_instance(spec);
    if (inst.k >= 2) {
      const auto res = models::solve_model(models::build_cut_model(inst, {}), root);
      ++cut_checked;
      if (!res.root_lp || *res.root_lp != Rational(1)) {
        problems.push_back("cut " + spec.name + " root " + (res.root_lp ? res.root_lp->str() : "none"));
      }
    }
    if (inst.dim() >= 2) {
      const auto res = models::solve_model(models::build_compact(inst, {}), root);
      ++compact_checked;
      if (!res.root_lp || *res.root_lp != Rational(1)) {
        problems.push_back("compact " + spec.name + " root " + (res.root_lp ? res.root_lp->str() : "none"));
      }
    }
  }
  Outcome o;
  o.pass = problems.empty();
  o.detail = "cut root 1 on " + std::to_string(cut_checked - static_cast<int>(problems.size())) + "/" +
             std::to_string(cut_checked) + " (k>=2), compact root checked on " + std::to_string(compact_checked);
  for (const auto& p : problems) o.detail += "; " + p;
  return o;
}

PointSet square_ring() {
  PointSet y(2);
  for (int a = -1; a <= 2; ++a) {
    for (int b = -1; b <= 2; ++b) {
      if (a < 0 || a > 1 || b < 0 || b > 1) y.add({a, b});
    }
  }
  return y;
}

Outcome criterion_3() {
  const PointSet square(2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  const auto inst = models::make_instance(square, square_ring(), kEps);
  const auto rb = cg::root_bounds(inst);
  const int h = sep::max_hiding_set_bruteforce(inst.x, inst.y);
  std::vector<std::string> problems;
  if (!rb.lp_value || *rb.lp_value != Rational(8, 3)) {
    problems.push_back("square root " + (rb.lp_value ? rb.lp_value->str() : std::string("none")));
  }
  if (h != 2) problems.push_back("square H " + std::to_string(h));
  int checked = 0;
  for (const auto& spec : desk()) {
    const auto di = harness::to_instance(spec);
    const auto b = cg::root_bounds(di);
    const int hd = sep::max_hiding_set_bruteforce(di.x, di.y);
    ++checked;
    if (!b.lp_value || *b.lp_value < Rational(hd)) {
      problems.push_back(spec.name + ": root " + (b.lp_value ? b.lp_value->str() : "none") + " < H " +
                         std::to_string(hd));
    }
  }
  Outcome o;
  o.pass = problems.empty();
  o.detail = "square root " + (rb.lp_value ? rb.lp_value->str() : std::string("none")) + ", H " + std::to_string(h) +
             ", root >= H on " + std::to_string(checked) + " instances";
  for (const auto& p : problems) o.detail += "; " + p;
  return o;
}

Outcome criterion_4() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> problems;
  {
    const auto inst = harness::to_instance(desk().front());
    models::EnhancementOptions bad;
    bad.sym = models::Sym::kAdvanced;
    bad.a_sorting = true;
    bool rejected = false;
    try {
      (void)models::build_compact(inst, bad);
    } catch (const std::invalid_argument&) {
      rejected = true;
    }
    if (!rejected) problems.push_back("advanced symmetry with a-sorting accepted");
  }
  int unresolved = 0;
  int runs = 0;
  for (const auto& spec : desk()) {
    const auto ref = cg::solve_colgen(harness::to_instance(spec));
    if (ref.status != mip::MipStatus::kOptimal) {
      problems.push_back(spec.name + ": no reference optimum");
      continue;
    }
    for (auto m : {ModelChoice::kCompact, ModelChoice::kCut}) {
      for (bool hiding : {false, true}) {
        for (auto sym : {models::Sym::kNone, models::Sym::kSimple, models::Sym::kAdvanced}) {
          for (bool prop : {false, true}) {
            RunConfig cfg;
            cfg.model = m;
            cfg.enh.hiding = hiding;
            cfg.enh.sym = sym;
            cfg.enh.prop = prop;
            cfg.time_seconds = kEnhancementLimit;
            auto r = harness::run_instance(spec, cfg);
            ++runs;
            if (r.status == RunStatus::kOptimal) {
              if (*r.value != *ref.value) problems.push_back(r.setting + " " + spec.name + " optimum changed");
            } else {
              ++unresolved;
              const bool consistent =
                  (!r.value || *r.value >= *ref.value) && (!r.dual_bound || *r.dual_bound <= *ref.value);
              if (!consistent) problems.push_back(r.setting + " " + spec.name + " bounds exclude the optimum");
            }
            g_enhancement_runs.push_back(std::move(r));
          }
        }
      }
    }
  }
  {
    std::ofstream csv("acceptance_enhancements.csv");
    csv << "setting,name,status,value,dual_bound,nodes,time\n";
    for (const auto& r : g_enhancement_runs) {
      csv << r.setting << "," << r.name << "," << (r.status == RunStatus::kOptimal ? "optimal" : "limit") << ","
          << (r.value ? std::to_string(*r.value) : "") << "," << (r.dual_bound ? std::to_string(*r.dual_bound) : "")
          << "," << r.node_count << "," << fmt(r.wall_time) << "\n";
    }
    const auto rows = harness::aggregate(g_enhancement_runs);
    std::ofstream agg("acceptance_enhancements_aggregate.csv");
    agg << harness::aggregate_csv(rows);
  }
  Outcome o;
  o.pass = problems.empty() && unresolved == 0;
  o.detail = std::to_string(runs - unresolved) + "/" + std::to_string(runs) + " runs optimal and unchanged, " +
             std::to_string(unresolved) + " hit the " + fmt(kEnhancementLimit) +
             " s limit with consistent bounds, nodes in acceptance_enhancements.csv, " + fmt(since(t0)) + " s";
  for (const auto& p : problems) o.detail += "; " + p;
  return o;
}

Outcome criterion_5() {
  run_desk();
  std::map<std::string, const InstanceSpec*> specs;
  for (const auto& s : desk()) specs[s.name] = &s;
  int checked = 0;
  std::vector<std::string> problems;
  for (const auto* runs : {&g_desk_runs, &g_enhancement_runs}) {
    for (const auto& r : *runs) {
      if (r.status != RunStatus::kOptimal) continue;
      ++checked;
      const auto& spec = *specs.at(r.name);
      const auto y = harness::resolve_y(spec);
      if (static_cast<int>(r.relaxation.size()) != *r.value) {
        problems.push_back(r.setting + " " + r.name + ": " + std::to_string(r.relaxation.size()) + " inequalities");
      } else if (!sep::verify_relaxation(spec.x, y, r.relaxation, spec.eps)) {
        problems.push_back(r.setting + " " + r.name + ": relaxation does not separate");
      }
    }
  }
  Outcome o;
  o.pass = problems.empty() && checked > 0;
  o.detail = std::to_string(checked) + " optimal runs re-checked exactly";
  for (const auto& p : problems) o.detail += "; " + p;
  return o;
}

Outcome criterion_6() {
  int harvested = 0;
  int sampled = 0;
  int failures = 0;
  std::string first;
  auto fail = [&](const std::string& why) {
    if (failures++ == 0) first = why;
  };
  for (const auto& spec : desk()) {
    const auto inst = harness::to_instance(spec);
    const sep::Oracle oracle(inst.x, inst.eps);
    std::optional<std::vector<std::vector<std::uint32_t>>> partitions;
    if (inst.y.size() <= 8) {
      const auto subsets = sep::separable_subsets(oracle, inst.y);
      partitions = testsupport::separable_partitions(static_cast<int>(inst.y.size()),
                                                     std::set<std::uint32_t>(subsets.begin(), subsets.end()));
    }
    cg::ColgenOptions o;
    o.limits.time_seconds = 60;
    o.on_branch = [&](std::span<const Rational> z, std::span<const cg::Column> pool) {
      ++harvested;
      if (auto why = testsupport::check_choice(z, pool, partitions ? &*partitions : nullptr)) {
        fail(spec.name + ": " + *why);
      }
    };
    (void)cg::solve_colgen(inst, o);
  }
  std::mt19937 rng(2024);
  testsupport::RfCheck sample;
  for (int pass = 0; pass < 10 && harvested + sample.fractional < 100; ++pass) {
    for (const auto& spec : desk()) {
      const int missing = 100 - harvested - sample.fractional;
      if (missing <= 0) break;
      const auto y = harness::resolve_y(spec);
      if (y.size() > 8 || y.size() < 2) continue;
      const sep::Oracle oracle(spec.x, spec.eps);
      testsupport::check_ryan_foster(oracle, y, std::min(10, missing), rng, sample, 100);
    }
  }
  sampled = sample.fractional;
  if (sample.failures > 0) fail(sample.first_failure);
  Outcome o;
  o.pass = failures == 0 && harvested + sampled >= 100;
  o.detail = std::to_string(harvested) + " fractional masters from branch-and-price runs, " + std::to_string(sampled) +
             " from sampled restricted masters (|Y| <= 8, all separable partitions checked), " +
             std::to_string(failures) + " failures";
  if (failures) o.detail += "; first: " + first;
  return o;
}

std::optional<std::string> check_permuted(const InstanceSpec& spec, int& permutations) {
  const auto inst = harness::to_instance(spec);
  const auto gens = symmetry::y_generators(inst.x, inst.y, true);
  if (gens.empty()) return std::string("no generator");
  mip::Options mo;
  mo.limits.time_seconds = kSymmetryLimit;
  const auto base = models::build_compact(inst, {});
  const auto res = models::solve_model(base, mo);
  if (res.status != mip::MipStatus::kOptimal) return std::string("not solved");
  for (const auto& phi : gens) {
    auto m = models::build_compact(inst, {});
    m.incumbent.reset();
    for (int y = 0; y < m.vars.ny; ++y) {
      for (int i = 0; i < m.vars.k; ++i) {
        const Rational v = res.incumbent[base.vars.s(y, i)];
        const int var = m.vars.s(phi[y], i);
        m.model.lp.lower[var] = v;
        m.model.lp.upper[var] = v;
      }
    }
    const auto r = models::solve_model(m, mo);
    ++permutations;
    if (r.status != mip::MipStatus::kOptimal || *r.primal_bound != *res.primal_bound) {
      return "permuted s gives " + (r.primal_bound ? r.primal_bound->str() : std::string("no solution")) +
             " instead of " + res.primal_bound->str();
    }
  }
  return std::nullopt;
}

Outcome criterion_7() {
  std::vector<std::string> problems;
  const auto x = translated_simplex();
  const auto y = geometry::l1_neighborhood(x, 1);
  const auto with = symmetry::y_generators(x, y, true);
  const auto without = symmetry::y_generators(x, y, false);
  if (with.empty()) problems.push_back("no generator after the shift");
  if (!without.empty()) problems.push_back("generator found without the shift");

  std::vector<InstanceSpec> sample;
  sample.push_back(explicit_spec("shifted-simplex-r1", x, y));
  sample.push_back(explicit_spec("shifted-simplex-r2", x, geometry::l1_neighborhood(x, 2)));
  for (const auto& spec : desk()) {
    if (spec.dim == 2 && spec.name.rfind("random", 0) != 0) sample.push_back(spec);
  }
  for (const auto& spec : desk()) {
    if (spec.name.rfind("random", 0) == 0 && !symmetry::y_generators(spec.x, harness::resolve_y(spec)).empty()) {
      sample.push_back(spec);
    }
  }
  sample.push_back(harness::generate_basic("simplex", 3, 1));
  int used = 0;
  int permutations = 0;
  for (const auto& spec : sample) {
    if (used == 10) break;
    const auto err = check_permuted(spec, permutations);
    if (err && *err == "no generator") continue;
    ++used;
    if (err) problems.push_back(spec.name + ": " + *err);
  }
  if (used < 10) problems.push_back("only " + std::to_string(used) + " symmetric instances");
  Outcome o;
  o.pass = problems.empty();
  o.detail = "t+simplex: " + std::to_string(with.size()) + " generator(s) shifted, " + std::to_string(without.size()) +
             " unshifted; " + std::to_string(permutations) + " permuted optima on " + std::to_string(used) +
             " instances";
  for (const auto& p : problems) o.detail += "; " + p;
  return o;
}

Outcome criterion_8() {
  std::vector<std::string> problems;
  const std::vector<double> times{90, 390};
  const double s = harness::sgm(times, 10);
  if (std::abs(s - 190) > 1e-9) problems.push_back("sgm " + fmt(s));
  struct Hand {
    PointSet x;
    PointSet y;
    Rational m;
  };
  const PointSet square(2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  const std::vector<Hand> hand{
      {square, square_ring(), Rational(6001, 1000)},
      {PointSet(1, {{0}}), PointSet(1, {{-1}, {1}}), Rational(1001, 1000)},
      {harness::generate_basic("cross", 2, 1).x, geometry::l1_neighborhood(harness::generate_basic("cross", 2, 1).x, 1),
       Rational(6001, 1000)},
      {harness::generate_basic("simplex", 3, 1).x,
       geometry::l1_neighborhood(harness::generate_basic("simplex", 3, 1).x, 1), Rational(9001, 1000)},
      {harness::generate_basic("cube", 3, 2).x, geometry::l1_neighborhood(harness::generate_basic("cube", 3, 2).x, 2),
       Rational(12001, 1000)},
  };
  for (const auto& h : hand) {
    const auto inst = models::make_instance(h.x, h.y, kEps);
    if (inst.big_m != h.m) problems.push_back("M " + inst.big_m.str() + " expected " + h.m.str());
  }
  const Rational theta = cg::fractionality(Rational(3, 10));
  if (theta != Rational(1, 5)) problems.push_back("theta(3/10) " + theta.str());
  Outcome o;
  o.pass = problems.empty();
  o.detail = "sgm({90,390},10) = " + fmt(s) + ", M on " + std::to_string(hand.size()) + " instances, theta(3/10) = " +
             theta.str();
  for (const auto& p : problems) o.detail += "; " + p;
  return o;
}

Outcome criterion_9() {
  std::vector<std::string> problems;
  std::string detail;
  for (const char* file : {"sbox/present.sbox", "sbox/ascon.sbox"}) {
    const auto spec = harness::read_sbox(std::string(RCLAB_DATA_DIR) + "/" + file);
    const auto y = harness::resolve_y(spec);
    const std::string counts = std::to_string(spec.x.size()) + "/" + std::to_string(y.size());
    detail += (detail.empty() ? "" : ", ") + std::string(file) + " " + counts;
    const bool ok = (spec.dim == 8 && counts == "16/240") || (spec.dim == 10 && counts == "32/992");
    if (!ok) problems.push_back(std::string(file) + " counts " + counts);
    (void)harness::to_instance(spec);
  }
  Outcome o;
  o.pass = problems.empty();
  o.detail = detail;
  for (const auto& p : problems) o.detail += "; " + p;
  return o;
}

const std::map<int, std::pair<std::string, std::function<Outcome()>>>& criteria() {
  static const std::map<int, std::pair<std::string, std::function<Outcome()>>> all{
      {1, {"desk suite: all models agree with brute force", criterion_1}},
      {2, {"root LP of cut and compact models is 1", criterion_2}},
      {3, {"column generation root 8/3, H = 2, root >= H", criterion_3}},
      {4, {"enhancement combinations keep the optimum", criterion_4}},
      {5, {"optimal relaxations re-verified exactly", criterion_5}},
      {6, {"Ryan-Foster pair exists and children partition covers", criterion_6}},
      {7, {"symmetry detection needs the shift; permuted optima", criterion_7}},
      {8, {"formula checks", criterion_8}},
      {9, {"S-box ingestion", criterion_9}},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::stoi(argv[i]));
  if (wanted.empty()) {
    for (const auto& [id, c] : criteria()) wanted.push_back(id);
  }
  int failed = 0;
  for (int id : wanted) {
    const auto it = criteria().find(id);
    if (it == criteria().end()) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("criterion %d %s: %s: %s\n", id, o.pass ? "PASS" : "FAIL", it->second.first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
