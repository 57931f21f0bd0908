#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "rclab/harness.hpp"

namespace fs = std::filesystem;
using namespace rclab;
using namespace rclab::harness;

namespace {

struct SolveArgs {
  std::string model = "compact";
  int hiding = 0;
  std::string sym = "0";
  int prop = 0;
  std::string eps;
  double time_limit = 600;
  std::int64_t nodes = -1;
  std::string out;
};

void add_solve_options(CLI::App* app, SolveArgs& a) {
  app->add_option("--model", a.model, "compact | cut | colgen | hybrid")
      ->check(CLI::IsMember({"compact", "cut", "colgen", "hybrid"}));
  app->add_option("--hiding", a.hiding, "hiding set cuts")->check(CLI::IsMember({0, 1}));
  app->add_option("--sym", a.sym, "0 | s | a")->check(CLI::IsMember({"0", "s", "a"}));
  app->add_option("--prop", a.prop, "convexity propagation")->check(CLI::IsMember({0, 1}));
  app->add_option("--eps", a.eps, "override eps as P/Q");
  app->add_option("--time-limit", a.time_limit, "seconds per instance");
  app->add_option("--nodes", a.nodes, "node limit");
  app->add_option("--out", a.out, "output directory");
}

RunConfig config_of(const SolveArgs& a) {
  RunConfig cfg;
  cfg.model = parse_model(a.model);
  cfg.enh.hiding = a.hiding != 0;
  cfg.enh.sym = a.sym == "s" ? models::Sym::kSimple : a.sym == "a" ? models::Sym::kAdvanced : models::Sym::kNone;
  cfg.enh.prop = a.prop != 0;
  cfg.time_seconds = a.time_limit;
  cfg.nodes = a.nodes;
  return cfg;
}

std::string file_key(const Report& r) {
  std::string s = r.name + "." + r.setting;
  for (char& c : s) {
    if (c == '/') c = '_';
  }
  return s;
}

void write_report(const Report& r, const std::string& dir) {
  if (dir.empty()) return;
  fs::create_directories(dir);
  std::ofstream(fs::path(dir) / (file_key(r) + ".json")) << report_to_json(r).dump(2) << "\n";
}

std::string summary(const Report& r) {
  std::ostringstream os;
  os << r.name << " " << r.setting << " status="
     << (r.status == RunStatus::kOptimal ? "optimal" : r.status == RunStatus::kLimit ? "limit" : "infeasible")
     << " rc=" << (r.value ? std::to_string(*r.value) : "-")
     << " bound=" << (r.dual_bound ? std::to_string(*r.dual_bound) : "-") << " nodes=" << r.node_count
     << " time=" << r.wall_time << " verified=" << (r.verified ? "yes" : "no");
  if (!r.message.empty()) os << " (" << r.message << ")";
  return os.str();
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  return out;
}

std::vector<std::vector<int>> parse_antichain(const std::string& s) {
  std::vector<std::vector<int>> out;
  std::stringstream ss(s);
  std::string member;
  while (std::getline(ss, member, ',')) {
    std::vector<int> set;
    for (char c : member) {
      if (c < '1' || c > '9') throw std::invalid_argument("antichain members are digit strings like 12,3");
      set.push_back(c - '0');
    }
    out.push_back(std::move(set));
  }
  return out;
}

int run_solve(const std::string& instance, const SolveArgs& a) {
  auto spec = load_instance(instance);
  if (!a.eps.empty()) spec.eps = parse_rational(a.eps);
  const auto rep = run_instance(spec, config_of(a));
  write_report(rep, a.out);
  std::cout << summary(rep) << "\n";
  return exit_code(rep);
}

int run_bench(const std::string& suite_name, const SolveArgs& a, int jobs) {
  const auto specs = suite(suite_name);
  const auto cfg = config_of(a);
  std::vector<Report> reports(specs.size());
  std::atomic<std::size_t> next{0};
  std::mutex io;
  auto worker = [&]() {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      reports[i] = run_instance(specs[i], cfg);
      std::lock_guard<std::mutex> lock(io);
      write_report(reports[i], a.out);
      std::cout << summary(reports[i]) << std::endl;
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  const auto rows = aggregate(reports);
  std::cout << aggregate_text(rows);
  if (!a.out.empty()) std::ofstream(fs::path(a.out) / "aggregate.csv") << aggregate_csv(rows);
  int code = 0;
  for (const auto& r : reports) code = std::max(code, exit_code(r) == 1 ? 1 : 0);
  return code;
}

int run_agg(const std::string& dir, const std::string& out) {
  std::vector<Report> reports;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::ifstream in(f);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::exception&) {
      continue;
    }
    if (j.is_object() && j.contains("setting") && j.contains("status")) reports.push_back(report_from_json(j));
  }
  if (reports.empty()) throw std::invalid_argument("no reports in " + dir);
  const auto rows = aggregate(reports);
  std::cout << aggregate_text(rows);
  std::ofstream(out.empty() ? (fs::path(dir) / "aggregate.csv") : fs::path(out)) << aggregate_csv(rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rc: exact epsilon-relaxation complexity"};
  app.require_subcommand(1);

  std::string instance;
  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "solve one instance");
  solve->add_option("--instance", instance, "instance JSON")->required();
  add_solve_options(solve, solve_args);

  std::string kind;
  int dim = 0;
  int radius = 1;
  std::string antichain, sbox_file, table, gen_out, eps;
  int bits = 0;
  auto* gen = app.add_subcommand("gen", "write an instance JSON");
  gen->add_option("kind", kind, "cube | cross | simplex | downcld | sbox")
      ->required()
      ->check(CLI::IsMember({"cube", "cross", "simplex", "downcld", "sbox"}));
  gen->add_option("--dim", dim, "dimension");
  gen->add_option("--radius", radius, "l1 radius of Y");
  gen->add_option("--antichain", antichain, "downcld antichain, e.g. 12,3");
  gen->add_option("--file", sbox_file, "sbox file with 0/1 lines");
  gen->add_option("--table", table, "sbox lookup table, comma separated");
  gen->add_option("--bits", bits, "sbox width n");
  gen->add_option("--eps", eps, "eps as P/Q");
  gen->add_option("--out", gen_out, "output file (stdout if empty)");

  std::string suite_name;
  int jobs = 1;
  SolveArgs bench_args;
  auto* bench = app.add_subcommand("bench", "run a named suite");
  bench->add_option("--suite", suite_name, "desk | basic | downcld")->required();
  bench->add_option("--jobs", jobs, "worker threads");
  add_solve_options(bench, bench_args);

  std::string agg_in, agg_out;
  auto* agg = app.add_subcommand("agg", "aggregate reports");
  agg->add_option("--in", agg_in, "report directory")->required();
  agg->add_option("--out", agg_out, "CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve) return run_solve(instance, solve_args);
    if (*bench) return run_bench(suite_name, bench_args, jobs);
    if (*agg) return run_agg(agg_in, agg_out);
    InstanceSpec spec;
    if (kind == "downcld") {
      spec = generate_downcld(dim, parse_antichain(antichain), radius);
    } else if (kind == "sbox") {
      if (!sbox_file.empty()) {
        spec = read_sbox(sbox_file);
      } else {
        const auto t = parse_int_list(table);
        std::stringstream lines;
        for (const auto& l : sbox_graph_lines(t, bits)) lines << l << "\n";
        spec = parse_sbox(lines, "sbox-" + std::to_string(bits) + "bit");
      }
    } else {
      spec = generate_basic(kind, dim, radius);
    }
    if (!eps.empty()) spec.eps = parse_rational(eps);
    const auto text = to_json(spec).dump(2);
    if (gen_out.empty()) {
      std::cout << text << "\n";
    } else {
      std::ofstream(gen_out) << text << "\n";
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
