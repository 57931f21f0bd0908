#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rclab/harness.hpp"

namespace rclab::harness {

using geometry::Point;

Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  auto parse_int = [&](const std::string& t) -> std::int64_t {
    std::size_t pos = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(t, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed rational '" + s + "'");
    }
    if (pos != t.size() || t.empty()) throw std::invalid_argument("malformed rational '" + s + "'");
    return v;
  };
  if (slash == std::string::npos) return Rational(parse_int(s));
  const std::int64_t den = parse_int(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  return Rational(parse_int(s.substr(0, slash)), den);
}

PointSet resolve_y(const InstanceSpec& spec) {
  switch (spec.y_source) {
    case YSource::kExplicit:
      return spec.y;
    case YSource::kL1Radius:
      return geometry::l1_neighborhood(spec.x, spec.radius);
    case YSource::kBinaryComplement: {
      if (spec.dim > 20) throw std::invalid_argument("binary complement needs dim <= 20");
      PointSet y(spec.dim);
      for (std::uint32_t mask = 0; mask < (1u << spec.dim); ++mask) {
        Point p(spec.dim);
        for (int j = 0; j < spec.dim; ++j) p[j] = (mask >> (spec.dim - 1 - j)) & 1u;
        if (!spec.x.contains(p)) y.add(std::move(p));
      }
      return y;
    }
  }
  throw std::logic_error("resolve_y: unknown source");
}

models::RcInstance to_instance(const InstanceSpec& spec) {
  if (spec.x.dim() != spec.dim) throw std::invalid_argument("instance: X dimension differs from dim");
  return models::make_instance(spec.x, resolve_y(spec), spec.eps, spec.k);
}

// ---------------------------------------------------------------------------

InstanceSpec generate_basic(const std::string& shape, int d, int radius) {
  if (d < 1) throw std::invalid_argument("basic: d must be positive");
  if (radius < 1) throw std::invalid_argument("basic: radius must be positive");
  InstanceSpec spec;
  spec.dim = d;
  spec.x = PointSet(d);
  if (shape == "cube") {
    if (d > 20) throw std::invalid_argument("basic: cube dimension too large");
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
      Point p(d);
      for (int j = 0; j < d; ++j) p[j] = (mask >> j) & 1u;
      spec.x.add(std::move(p));
    }
  } else if (shape == "cross") {
    spec.x.add(Point(d, 0));
    for (int j = 0; j < d; ++j) {
      for (int sg : {1, -1}) {
        Point p(d, 0);
        p[j] = sg;
        spec.x.add(std::move(p));
      }
    }
  } else if (shape == "simplex") {
    spec.x.add(Point(d, 0));
    for (int j = 0; j < d; ++j) {
      Point p(d, 0);
      p[j] = 1;
      spec.x.add(std::move(p));
    }
  } else {
    throw std::invalid_argument("basic: unknown shape '" + shape + "'");
  }
  spec.name = shape + "-d" + std::to_string(d) + "-r" + std::to_string(radius);
  spec.y_source = YSource::kL1Radius;
  spec.radius = radius;
  return spec;
}

InstanceSpec generate_downcld(int d, const std::vector<std::vector<int>>& antichain, int radius) {
  if (d < 1 || d > 20) throw std::invalid_argument("downcld: d out of range");
  if (radius < 1) throw std::invalid_argument("downcld: radius must be positive");
  std::vector<std::uint32_t> masks;
  std::uint32_t all = 0;
  for (const auto& member : antichain) {
    std::uint32_t m = 0;
    for (int e : member) {
      if (e < 1 || e > d) throw std::invalid_argument("downcld: element outside 1..d");
      m |= 1u << (e - 1);
    }
    masks.push_back(m);
    all |= m;
  }
  for (std::size_t i = 0; i < masks.size(); ++i) {
    for (std::size_t j = 0; j < masks.size(); ++j) {
      if (i != j && (masks[i] & masks[j]) == masks[i]) throw std::invalid_argument("downcld: not an antichain");
    }
  }
  if (all != (d == 32 ? ~0u : (1u << d) - 1)) throw std::invalid_argument("downcld: X is not full-dimensional");
  InstanceSpec spec;
  spec.dim = d;
  spec.x = PointSet(d);
  for (std::uint32_t s = 0; s < (1u << d); ++s) {
    if (std::none_of(masks.begin(), masks.end(), [&](std::uint32_t m) { return (s & m) == s; })) continue;
    Point p(d);
    for (int j = 0; j < d; ++j) p[j] = (s >> j) & 1u;
    spec.x.add(std::move(p));
  }
  std::ostringstream name;
  name << "downcld-d" << d << "-";
  for (std::size_t i = 0; i < antichain.size(); ++i) {
    name << (i ? "_" : "");
    for (int e : antichain[i]) name << e;
  }
  name << "-r" << radius;
  spec.name = name.str();
  spec.y_source = YSource::kL1Radius;
  spec.radius = radius;
  return spec;
}

std::vector<std::vector<std::vector<int>>> downcld_sample(int d) {
  if (d < 1 || d > 4) throw std::invalid_argument("downcld_sample: d must be in 1..4");
  const int nsub = (1 << d) - 1;  // nonempty subsets, as masks 1..nsub
  std::vector<std::vector<std::vector<int>>> out;
  for (std::uint32_t pick = 1; pick < (1u << nsub); ++pick) {
    std::vector<std::uint32_t> members;
    for (int s = 1; s <= nsub; ++s) {
      if (pick >> (s - 1) & 1u) members.push_back(static_cast<std::uint32_t>(s));
    }
    bool ok = true;
    std::uint32_t all = 0;
    for (auto a : members) {
      all |= a;
      for (auto b : members) ok = ok && (a == b || (a & b) != a);
    }
    if (!ok || all != static_cast<std::uint32_t>(nsub)) continue;
    std::vector<std::vector<int>> ac;
    for (auto m : members) {
      std::vector<int> set;
      for (int j = 0; j < d; ++j) {
        if (m >> j & 1u) set.push_back(j + 1);
      }
      ac.push_back(std::move(set));
    }
    out.push_back(std::move(ac));
  }
  return out;
}

InstanceSpec generate_random_planar(std::uint32_t seed, int max_y) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> coord(0, 3);
  std::uniform_int_distribution<int> count(1, 4);
  const int n = count(rng);
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) pts.push_back({coord(rng), coord(rng)});
  const auto hull = geometry::convex_hull_facets(2, pts);
  PointSet x = geometry::integer_points_in_hull(hull, {0, 0}, {3, 3});
  std::vector<Point> cand = geometry::l1_neighborhood(x, 1 + static_cast<int>(seed % 2)).points();
  std::shuffle(cand.begin(), cand.end(), rng);
  if (static_cast<int>(cand.size()) > max_y) cand.resize(max_y);
  std::sort(cand.begin(), cand.end());
  InstanceSpec spec;
  spec.name = "random2-" + std::to_string(seed);
  spec.dim = 2;
  spec.x = std::move(x);
  spec.y = PointSet(2, std::move(cand));
  spec.y_source = YSource::kExplicit;
  return spec;
}

// ---------------------------------------------------------------------------

InstanceSpec parse_sbox(std::istream& in, const std::string& name) {
  std::string line;
  int len = -1;
  std::vector<Point> pts;
  std::set<Point> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    if (len < 0) len = static_cast<int>(line.size());
    if (static_cast<int>(line.size()) != len) {
      throw std::invalid_argument("sbox: inconsistent length on line " + std::to_string(lineno));
    }
    if (len % 2 != 0) throw std::invalid_argument("sbox: vector length must be even");
    Point p;
    for (char c : line) {
      if (c != '0' && c != '1') throw std::invalid_argument("sbox: malformed line " + std::to_string(lineno));
      p.push_back(c - '0');
    }
    if (!seen.insert(p).second) throw std::invalid_argument("sbox: duplicate vector on line " + std::to_string(lineno));
    pts.push_back(std::move(p));
  }
  if (pts.empty()) throw std::invalid_argument("sbox: empty file");
  InstanceSpec spec;
  spec.name = name;
  spec.dim = len;
  spec.x = PointSet(len, std::move(pts));
  spec.y_source = YSource::kBinaryComplement;
  return spec;
}

InstanceSpec read_sbox(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("sbox: cannot open " + path);
  auto stem = path.substr(path.find_last_of('/') + 1);
  stem = stem.substr(0, stem.find('.'));
  return parse_sbox(in, "sbox-" + stem);
}

std::vector<std::string> sbox_graph_lines(std::span<const int> table, int n) {
  if (static_cast<int>(table.size()) != (1 << n)) throw std::invalid_argument("sbox: table size must be 2^n");
  std::vector<std::string> out;
  for (int v = 0; v < (1 << n); ++v) {
    std::string s;
    for (int j = n - 1; j >= 0; --j) s += static_cast<char>('0' + ((v >> j) & 1));
    for (int j = n - 1; j >= 0; --j) s += static_cast<char>('0' + ((table[v] >> j) & 1));
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Json points_json(const PointSet& s) {
  Json arr = Json::array();
  for (const auto& p : s) arr.push_back(p);
  return arr;
}

PointSet points_from_json(const Json& j, int dim, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string("instance: ") + what + " must be an array");
  PointSet s(dim);
  for (const auto& p : j) {
    if (!p.is_array() || static_cast<int>(p.size()) != dim) {
      throw std::invalid_argument(std::string("instance: bad point in ") + what);
    }
    Point q;
    for (const auto& v : p) {
      if (!v.is_number_integer()) throw std::invalid_argument(std::string("instance: non-integer coordinate in ") + what);
      q.push_back(v.get<std::int64_t>());
    }
    if (s.contains(q)) throw std::invalid_argument(std::string("instance: duplicate point in ") + what);
    s.add(std::move(q));
  }
  return s;
}

}  // namespace

Json to_json(const InstanceSpec& spec) {
  Json j;
  j["name"] = spec.name;
  j["dim"] = spec.dim;
  j["eps"] = spec.eps.str();
  j["X"] = points_json(spec.x);
  switch (spec.y_source) {
    case YSource::kExplicit:
      j["Y"] = points_json(spec.y);
      break;
    case YSource::kL1Radius:
      j["Y"] = Json{{"l1_radius", spec.radius}};
      break;
    case YSource::kBinaryComplement:
      j["Y"] = "binary_complement";
      break;
  }
  if (spec.k) j["k"] = *spec.k;
  return j;
}

InstanceSpec spec_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("instance: document must be an object");
  InstanceSpec spec;
  try {
    spec.name = j.value("name", std::string("instance"));
    if (!j.contains("dim") || !j["dim"].is_number_integer()) throw std::invalid_argument("instance: missing dim");
    spec.dim = j["dim"].get<int>();
    if (spec.dim < 1) throw std::invalid_argument("instance: dim must be positive");
    if (j.contains("eps")) {
      if (!j["eps"].is_string()) throw std::invalid_argument("instance: eps must be a \"p/q\" string");
      spec.eps = parse_rational(j["eps"].get<std::string>());
    }
    if (!j.contains("X")) throw std::invalid_argument("instance: missing X");
    spec.x = points_from_json(j["X"], spec.dim, "X");
    if (!j.contains("Y")) throw std::invalid_argument("instance: missing Y");
    const auto& y = j["Y"];
    if (y.is_array()) {
      spec.y_source = YSource::kExplicit;
      spec.y = points_from_json(y, spec.dim, "Y");
    } else if (y.is_object() && y.contains("l1_radius")) {
      spec.y_source = YSource::kL1Radius;
      spec.radius = y["l1_radius"].get<int>();
      if (spec.radius < 1) throw std::invalid_argument("instance: l1_radius must be positive");
    } else if (y.is_string() && y.get<std::string>() == "binary_complement") {
      spec.y_source = YSource::kBinaryComplement;
    } else {
      throw std::invalid_argument("instance: unsupported Y source");
    }
    if (j.contains("k")) spec.k = j["k"].get<int>();
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("instance: ") + e.what());
  }
  return spec;
}

InstanceSpec load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
  }
  return spec_from_json(j);
}

void save_instance(const InstanceSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_json(spec).dump(2) << "\n";
}

std::vector<InstanceSpec> suite(const std::string& name) {
  std::vector<InstanceSpec> out;
  if (name == "desk") {
    for (const char* shape : {"cube", "cross", "simplex"}) {
      for (int d = 1; d <= 3; ++d) {
        for (int r = 1; r <= 2; ++r) out.push_back(generate_basic(shape, d, r));
      }
    }
    for (std::uint32_t seed = 1; seed <= 10; ++seed) out.push_back(generate_random_planar(seed));
  } else if (name == "basic") {
    for (const char* shape : {"cube", "cross", "simplex"}) {
      for (int d = 3; d <= 5; ++d) {
        for (int r = 1; r <= 2; ++r) out.push_back(generate_basic(shape, d, r));
      }
    }
  } else if (name == "downcld") {
    for (int d = 3; d <= 4; ++d) {
      for (const auto& ac : downcld_sample(d)) out.push_back(generate_downcld(d, ac, 1));
    }
  } else {
    throw std::invalid_argument("unknown suite '" + name + "'");
  }
  return out;
}

}  // namespace rclab::harness
