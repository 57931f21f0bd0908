#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rclab/colgen.hpp"
#include "rclab/harness.hpp"
#include "rclab/separability.hpp"
#include "rclab/symmetry.hpp"

namespace py = pybind11;
using namespace rclab;

namespace {

geometry::PointSet to_points(const std::vector<std::vector<std::int64_t>>& pts, int dim) {
  return geometry::PointSet(dim, pts);
}

int dim_of(const std::vector<std::vector<std::int64_t>>& x) {
  if (x.empty()) throw std::invalid_argument("X is empty");
  return static_cast<int>(x.front().size());
}

harness::RunConfig config(const std::string& model, bool hiding, const std::string& sym, bool prop, double time_limit) {
  harness::RunConfig cfg;
  cfg.model = harness::parse_model(model);
  cfg.enh.hiding = hiding;
  if (sym == "s") {
    cfg.enh.sym = models::Sym::kSimple;
  } else if (sym == "a") {
    cfg.enh.sym = models::Sym::kAdvanced;
  } else if (sym != "0") {
    throw std::invalid_argument("sym must be 0, s or a");
  }
  cfg.enh.prop = prop;
  cfg.time_seconds = time_limit;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_rclab, m) {
  m.doc() = "Exact epsilon-relaxation complexity";
  py::register_exception<std::invalid_argument>(m, "InvalidInput", PyExc_ValueError);

  m.def(
      "solve_json",
      [](const std::string& instance, const std::string& model, bool hiding, const std::string& sym, bool prop,
         double time_limit) {
        const auto spec = harness::spec_from_json(harness::Json::parse(instance));
        py::gil_scoped_release release;
        const auto rep = harness::run_instance(spec, config(model, hiding, sym, prop, time_limit));
        return harness::report_to_json(rep).dump();
      },
      py::arg("instance"), py::arg("model") = "compact", py::arg("hiding") = false, py::arg("sym") = "0",
      py::arg("prop") = false, py::arg("time_limit") = 600.0);

  m.def(
      "generate_basic_json",
      [](const std::string& shape, int d, int radius) { return harness::to_json(harness::generate_basic(shape, d, radius)).dump(); },
      py::arg("shape"), py::arg("d"), py::arg("radius"));

  m.def(
      "rc_bruteforce",
      [](const std::vector<std::vector<std::int64_t>>& x, const std::vector<std::vector<std::int64_t>>& y,
         const std::string& eps) {
        const int d = dim_of(x);
        return sep::rc_bruteforce(to_points(x, d), to_points(y, d), harness::parse_rational(eps));
      },
      py::arg("x"), py::arg("y"), py::arg("eps") = "1/1000");

  m.def(
      "separate",
      [](const std::vector<std::vector<std::int64_t>>& x, const std::vector<std::vector<std::int64_t>>& f,
         const std::string& eps) -> std::optional<std::pair<std::vector<std::string>, std::string>> {
        const int d = dim_of(x);
        const auto fs = to_points(f, d);
        auto q = sep::eps_separable(to_points(x, d), fs.points(), harness::parse_rational(eps));
        if (!q) return std::nullopt;
        std::vector<std::string> a;
        for (const auto& c : q->a) a.push_back(c.str());
        return std::make_pair(a, q->b.str());
      },
      py::arg("x"), py::arg("f"), py::arg("eps") = "1/1000");

  m.def(
      "max_hiding_set",
      [](const std::vector<std::vector<std::int64_t>>& x, const std::vector<std::vector<std::int64_t>>& y) {
        const int d = dim_of(x);
        return sep::max_hiding_set_bruteforce(to_points(x, d), to_points(y, d));
      },
      py::arg("x"), py::arg("y"));

  m.def(
      "root_bounds",
      [](const std::string& instance) {
        const auto spec = harness::spec_from_json(harness::Json::parse(instance));
        const auto inst = harness::to_instance(spec);
        py::gil_scoped_release release;
        const auto rb = cg::root_bounds(inst);
        harness::Json j;
        j["dual_bound"] = rb.dual_bound ? harness::Json(*rb.dual_bound) : harness::Json(nullptr);
        j["lp_value"] = rb.lp_value ? harness::Json(rb.lp_value->str()) : harness::Json(nullptr);
        j["incumbent_size"] = rb.incumbent ? harness::Json(rb.incumbent->size()) : harness::Json(nullptr);
        return j.dump();
      },
      py::arg("instance"));

  m.def(
      "symmetry_generators",
      [](const std::vector<std::vector<std::int64_t>>& x, const std::vector<std::vector<std::int64_t>>& y,
         bool translate) {
        const int d = dim_of(x);
        const auto xs = to_points(x, d);
        const auto ys = to_points(y, d);
        const auto g = symmetry::build_symmetry_graph(xs, ys, translate);
        std::vector<std::vector<int>> out;
        for (const auto& p : symmetry::automorphism_generators(g, xs, ys)) out.push_back(p.pi);
        return out;
      },
      py::arg("x"), py::arg("y"), py::arg("translate") = true);

  m.def("sgm", [](const std::vector<double>& v, double shift) { return harness::sgm(v, shift); }, py::arg("values"),
        py::arg("shift"));
}
