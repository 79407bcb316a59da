#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "lagbill/flow.hpp"

namespace lagbill::app {

using json = nlohmann::ordered_json;

/// Bad scenario file, bad flag, or a scenario the core rejects (exit 2).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Check { Drift, Involution, Rank, Correspondence, Reflection };
const char* to_string(Check c) noexcept;
Check parse_check(const std::string& s);

struct Tolerances {
  double drift = 1e-7;
  double jump = 1e-10;
  double bracket = 1e-6;
  double correspondence = 1e-6;
  double reflection = 1e-10;
};

struct Scenario {
  json doc;  // fully resolved; re-loading it reproduces the run
  SpaceForm space;
  LagrangeParams params;
  std::vector<QuadricWall> walls;
  PhaseState initial;
  StopCondition stop;
  FlowOptions flow;
  std::vector<Check> checks;
  Tolerances tol;
  int samples = 20;          // random states / wall points per check
  double horizon = 5.0;      // chart time for the correspondence check
  std::uint64_t seed = 1;
};

/// Built-in scenario for a geometry name (euclidean|sphere|hyperbolic) and n:
/// a = 0.5, m = (1, 0.8), f = -0.3, one confocal spheroid around a fixed start.
json default_scenario(const std::string& geometry, int n);

/// Fills defaults, validates, and builds the core objects.
Scenario load_scenario(const json& doc);
json read_scenario_file(const std::string& path);

/// Sets a scalar at a dotted path ("params.m1", "walls.0.A"); short names
/// a, n, m1, m2, f, t_max, max_reflections, rtol, atol, seed are accepted.
void set_field(json& doc, const std::string& field, double value);

}  // namespace lagbill::app
