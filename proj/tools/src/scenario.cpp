#include "lagbill_app/scenario.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <map>

#include "lagbill/sampling.hpp"

namespace lagbill::app {

const char* to_string(Check c) noexcept {
  switch (c) {
    case Check::Drift: return "drift";
    case Check::Involution: return "involution";
    case Check::Rank: return "rank";
    case Check::Correspondence: return "correspondence";
    case Check::Reflection: return "reflection";
  }
  return "?";
}

Check parse_check(const std::string& s) {
  for (Check c : {Check::Drift, Check::Involution, Check::Rank, Check::Correspondence, Check::Reflection})
    if (s == to_string(c)) return c;
  throw ValidationError("unknown check '" + s + "'");
}

namespace {

constexpr std::array<double, 5> kStartQ{0.2, 0.3, 0.1, -0.15, 0.05};
constexpr std::array<double, 5> kStartV{1.2, -0.9, 1.6, 0.4, -0.7};

json require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  return obj.at(key);
}

double number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) throw ValidationError(std::string("field '") + key + "' must be a number");
  return obj.at(key).get<double>();
}

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const json& x : j) {
    if (!x.is_number()) throw ValidationError(std::string(what) + " must contain numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

SpaceForm make_space(const json& g) {
  const std::string kind = require(g, "kind").get<std::string>();
  const int n = require(g, "n").get<int>();
  const double a = require(g, "a").get<double>();
  if (kind == "euclidean") {
    const std::string branch = g.value("branch", "spherical");
    if (branch != "spherical" && branch != "hyperbolic") throw ValidationError("branch must be spherical or hyperbolic");
    return SpaceForm::chart(n, a, branch == "spherical" ? Branch::Spherical : Branch::Hyperbolic);
  }
  if (kind == "sphere") return SpaceForm::sphere(n, a);
  if (kind == "hyperbolic") return SpaceForm::hyperboloid(n, a);
  throw ValidationError("geometry.kind must be euclidean, sphere or hyperbolic");
}

WallKind wall_kind(const std::string& s) {
  if (s == "spheroid") return WallKind::Spheroid;
  if (s == "two_sheet") return WallKind::TwoSheetHyperboloid;
  throw ValidationError("wall kind must be spheroid or two_sheet");
}

Sheet sheet_of(const std::string& s) {
  if (s == "both") return Sheet::Both;
  if (s == "positive") return Sheet::Positive;
  if (s == "negative") return Sheet::Negative;
  throw ValidationError("wall sheet must be both, positive or negative");
}

Vec to_vec(const std::vector<double>& xs) { return Eigen::Map<const Vec>(xs.data(), static_cast<Eigen::Index>(xs.size())); }

// Initial state: "chart" frame takes n numbers and is pushed onto curved
// models; "ambient" takes n+1 numbers as stored.
PhaseState make_initial(const SpaceForm& space, const json& init) {
  const std::string frame = init.value("frame", "chart");
  const std::vector<double> q = numbers(require(init, "q"), "initial.q");
  const std::vector<double> v = numbers(require(init, "v"), "initial.v");
  if (frame == "ambient") {
    if (static_cast<int>(q.size()) != space.n + 1 || static_cast<int>(v.size()) != space.n + 1)
      throw ValidationError("ambient initial state needs n+1 components");
    return {to_vec(q), to_vec(v), 0.0};
  }
  if (frame != "chart") throw ValidationError("initial.frame must be chart or ambient");
  if (static_cast<int>(q.size()) != space.n || static_cast<int>(v.size()) != space.n)
    throw ValidationError("chart initial state needs n components");
  PhaseState s{Vec::Zero(space.n + 1), Vec::Zero(space.n + 1), 0.0};
  s.q.head(space.n) = to_vec(q);
  s.q[space.n] = -1.0;
  s.v.head(space.n) = to_vec(v);
  return space.curved() ? push_state(space.chart_form(), s) : s;
}

json vec_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

json default_scenario(const std::string& geometry, int n) {
  if (geometry != "euclidean" && geometry != "sphere" && geometry != "hyperbolic")
    throw ValidationError("geometry must be euclidean, sphere or hyperbolic");
  if (n < 2) throw ValidationError("n must be >= 2");
  const bool hyp = geometry == "hyperbolic";
  json q = json::array(), v = json::array();
  for (int i = 0; i < n; ++i) {
    q.push_back(kStartQ[i % kStartQ.size()] * (hyp ? 0.5 : 1.0) / (1 + i / 5));
    v.push_back(kStartV[i % kStartV.size()] * (hyp ? 0.7 : 1.0));
  }
  json doc;
  doc["geometry"] = {{"kind", geometry}, {"n", n}, {"a", 0.5}};
  doc["params"] = {{"m1", 1.0}, {"m2", 0.8}, {"f", -0.3}};
  doc["walls"] = json::array({{{"id", "spheroid"}, {"kind", "spheroid"}, {"A", hyp ? 0.6 : 0.9}}});
  doc["initial"] = {{"frame", "chart"}, {"q", q}, {"v", v}};
  doc["stop"] = {{"t_max", 1000.0}, {"max_reflections", 100}};
  return doc;
}

json read_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scenario file: ") + e.what());
  }
}

Scenario load_scenario(const json& input) try {
  Scenario sc;
  json doc;
  sc.space = make_space(require(input, "geometry"));
  doc["geometry"] = input.at("geometry");

  const json params = input.value("params", json::object());
  sc.params = {number(params, "m1", 0.0), number(params, "m2", 0.0), number(params, "f", 0.0)};
  doc["params"] = {{"m1", sc.params.m1}, {"m2", sc.params.m2}, {"f", sc.params.f}};

  // Walls are built in the chart paired with the geometry and projected, so
  // A and B are chart semi-axes in every geometry.
  doc["walls"] = json::array();
  const SpaceForm chart = sc.space.chart_form();
  int index = 0;
  for (const json& w : input.value("walls", json::array())) {
    const WallKind kind = wall_kind(require(w, "kind").get<std::string>());
    const std::string id = w.value("id", "wall" + std::to_string(index));
    const Sheet sheet = sheet_of(w.value("sheet", "both"));
    const double A = require(w, "A").get<double>();
    QuadricWall wall = w.contains("B") ? QuadricWall::make(chart, kind, A, w.at("B").get<double>(), id, sheet)
                                       : QuadricWall::from_focus(chart, kind, A, id, sheet);
    if (sc.space.curved()) wall = project_wall(wall);
    doc["walls"].push_back({{"id", wall.id}, {"kind", w.at("kind")}, {"A", wall.A}, {"B", wall.B},
                            {"sheet", to_string(wall.sheet)}});
    sc.walls.push_back(std::move(wall));
    ++index;
  }
  validate_walls(sc.space, sc.walls);

  sc.initial = make_initial(sc.space, require(input, "initial"));
  doc["initial"] = {{"frame", "ambient"}, {"q", vec_json(sc.initial.q)}, {"v", vec_json(sc.initial.v)}};

  const json stop = input.value("stop", json::object());
  sc.stop.t_max = number(stop, "t_max", 10.0);
  sc.stop.max_reflections = static_cast<std::size_t>(number(stop, "max_reflections", 1e9));
  if (!(sc.stop.t_max > 0)) throw ValidationError("stop.t_max must be positive");
  doc["stop"] = {{"t_max", sc.stop.t_max}, {"max_reflections", sc.stop.max_reflections}};

  const json integ = input.value("integrator", json::object());
  sc.flow.rtol = number(integ, "rtol", sc.flow.rtol);
  sc.flow.atol = number(integ, "atol", sc.flow.atol);
  sc.flow.h0 = number(integ, "h0", sc.flow.h0);
  sc.flow.h_max = number(integ, "h_max", 1e300);
  if (!(sc.flow.rtol > 0 && sc.flow.atol > 0 && sc.flow.h0 > 0 && sc.flow.h_max > 0))
    throw ValidationError("integrator tolerances and steps must be positive");
  doc["integrator"] = {{"rtol", sc.flow.rtol}, {"atol", sc.flow.atol}, {"h0", sc.flow.h0}, {"h_max", sc.flow.h_max}};

  doc["checks"] = json::array();
  for (const json& c : input.value("checks", json::array())) {
    const Check check = parse_check(c.get<std::string>());
    if (std::find(sc.checks.begin(), sc.checks.end(), check) != sc.checks.end()) continue;
    sc.checks.push_back(check);
    doc["checks"].push_back(to_string(check));
  }

  const json tol = input.value("tolerances", json::object());
  sc.tol = {number(tol, "drift", sc.tol.drift), number(tol, "jump", sc.tol.jump), number(tol, "bracket", sc.tol.bracket),
            number(tol, "correspondence", sc.tol.correspondence), number(tol, "reflection", sc.tol.reflection)};
  doc["tolerances"] = {{"drift", sc.tol.drift}, {"jump", sc.tol.jump}, {"bracket", sc.tol.bracket},
                       {"correspondence", sc.tol.correspondence}, {"reflection", sc.tol.reflection}};

  sc.samples = static_cast<int>(number(input, "samples", sc.samples));
  sc.horizon = number(input, "horizon", sc.horizon);
  if (sc.samples < 1 || !(sc.horizon > 0)) throw ValidationError("samples and horizon must be positive");
  const json seed = input.value("seed", json(1));
  if (!seed.is_number_integer() || seed.get<std::int64_t>() < 0) throw ValidationError("seed must be a non-negative integer");
  sc.seed = seed.get<std::uint64_t>();
  doc["samples"] = sc.samples;
  doc["horizon"] = sc.horizon;
  doc["seed"] = sc.seed;
  sc.doc = std::move(doc);
  return sc;
} catch (const json::exception& e) {
  throw ValidationError(std::string("scenario: ") + e.what());
} catch (const DomainError& e) {
  throw ValidationError(e.what());
} catch (const DimensionError& e) {
  throw ValidationError(e.what());
}

void set_field(json& doc, const std::string& field, double value) {
  static const std::map<std::string, std::string> aliases = {
      {"a", "geometry.a"}, {"n", "geometry.n"},        {"m1", "params.m1"},
      {"m2", "params.m2"}, {"f", "params.f"},          {"t_max", "stop.t_max"},
      {"max_reflections", "stop.max_reflections"},     {"rtol", "integrator.rtol"},
      {"atol", "integrator.atol"},                     {"seed", "seed"}};
  const auto it = aliases.find(field);
  const std::string path = it == aliases.end() ? field : it->second;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ValidationError("bad field path '" + field + "'");
    const bool last = dot == std::string::npos;
    if (node->is_array()) {
      std::size_t i = 0;
      try {
        i = std::stoul(key);
      } catch (const std::exception&) {
        throw ValidationError("bad array index in '" + field + "'");
      }
      if (i >= node->size()) throw ValidationError("array index out of range in '" + field + "'");
      node = &(*node)[i];
    } else {
      if (!node->is_object()) *node = json::object();
      node = &(*node)[key];
    }
    if (last) break;
    start = dot + 1;
  }
  const bool integral = field == "n" || field == "seed" || field == "max_reflections" ||
                        path == "geometry.n" || path == "seed" || path == "stop.max_reflections";
  if (integral) {
    if (value != std::floor(value)) throw ValidationError("field '" + field + "' needs an integer");
    *node = static_cast<std::int64_t>(value);
  } else {
    *node = value;
  }
}

}  // namespace lagbill::app
