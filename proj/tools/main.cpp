#include <iostream>

#include "CLI11.hpp"
#include "lagbill_app/run.hpp"

using namespace lagbill::app;

int main(int argc, char** argv) {
  CLI::App app{"lagbill: Lagrange-problem billiards in Euclidean, spherical and hyperbolic space"};
  app.require_subcommand(0, 1);
  CLI::App* run = app.add_subcommand("run", "simulate a scenario and run property checks (default)");
  run->fallthrough();

  std::string scenario_path, geometry, out = "lagbill_out", sweep_text;
  std::vector<std::string> checks;
  int n = 0;
  long long seed = -1;
  unsigned threads = 0;
  app.add_option("--scenario", scenario_path, "scenario JSON file")->check(CLI::ExistingFile);
  app.add_option("--check,--verify", checks, "drift|involution|rank|correspondence|reflection")
      ->delimiter(',')
      ->check(CLI::IsMember({"drift", "involution", "rank", "correspondence", "reflection"}));
  app.add_option("--geometry", geometry, "euclidean|sphere|hyperbolic")
      ->check(CLI::IsMember({"euclidean", "sphere", "hyperbolic"}));
  app.add_option("--n", n, "intrinsic dimension")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed for random states")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out, "output directory");
  app.add_option("--sweep", sweep_text, "field=start:stop:steps");
  app.add_option("--threads", threads, "sweep workers (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalid;
  }

  try {
    json doc;
    if (!scenario_path.empty()) {
      doc = read_scenario_file(scenario_path);
      if (!geometry.empty()) doc["geometry"]["kind"] = geometry;
      if (n != 0) doc["geometry"]["n"] = n;
    } else {
      doc = default_scenario(geometry.empty() ? "euclidean" : geometry, n == 0 ? 3 : n);
    }
    if (seed >= 0) doc["seed"] = seed;
    if (!checks.empty()) doc["checks"] = checks;

    if (!sweep_text.empty()) return run_sweep(doc, parse_sweep(sweep_text), out, std::cout, threads);
    const Scenario sc = load_scenario(doc);
    return run_scenario(sc, out, std::cout).exit_code;
  } catch (const ValidationError& e) {
    std::cerr << "invalid scenario: " << e.what() << '\n';
    return kInvalid;
  } catch (const lagbill::SingularityError& e) {
    std::cerr << "singularity: " << e.what() << '\n';
    return kSingular;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
}
