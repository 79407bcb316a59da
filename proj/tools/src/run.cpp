#include "lagbill_app/run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "lagbill/integrals.hpp"
#include "lagbill/projection.hpp"
#include "lagbill/sampling.hpp"

namespace lagbill::app {

int combine_exit(int a, int b) noexcept {
  auto rank = [](int c) { return c == kInvalid ? 3 : c == kSingular ? 2 : c == kCheckFailed ? 1 : 0; };
  return rank(a) >= rank(b) ? a : b;
}

namespace {

struct CheckResult {
  bool pass = true;
  std::string summary;
  json detail;
  std::string csv;  // written as <check>.csv when non-empty
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

// Independent stream per check so adding a check does not shift the others.
Rng check_rng(const Scenario& sc, Check c) {
  std::seed_seq seq{static_cast<std::uint32_t>(sc.seed), static_cast<std::uint32_t>(sc.seed >> 32),
                    static_cast<std::uint32_t>(c)};
  return Rng(seq);
}

bool singular(Termination t) {
  return t == Termination::Collision || t == Termination::Singular || t == Termination::Grazing ||
         t == Termination::StepUnderflow;
}

CheckResult check_drift(const Scenario& sc, const Trajectory& traj) {
  CheckResult r;
  std::ostringstream csv;
  csv << "integral,initial,max_drift,max_jump\n";
  double drift = 0, jump = 0;
  json rows = json::array();
  for (const DriftRow& row : drift_report(traj, integral_family(sc.space, sc.params))) {
    drift = std::max(drift, row.max_drift);
    jump = std::max(jump, row.max_jump);
    csv << row.name << ',' << format_double(row.initial) << ',' << format_double(row.max_drift) << ','
        << format_double(row.max_jump) << '\n';
    rows.push_back({{"integral", row.name}, {"initial", row.initial}, {"max_drift", row.max_drift},
                    {"max_jump", row.max_jump}});
  }
  r.pass = drift < sc.tol.drift && jump < sc.tol.jump;
  r.summary = "max drift " + sci(drift) + " (tol " + sci(sc.tol.drift) + "), max jump " + sci(jump) + " (tol " +
              sci(sc.tol.jump) + ") over " + std::to_string(traj.events.size()) + " reflections";
  r.detail = {{"max_drift", drift}, {"max_jump", jump}, {"rows", rows}};
  r.csv = csv.str();
  return r;
}

CheckResult check_involution(const Scenario& sc) {
  CheckResult r;
  Rng rng = check_rng(sc, Check::Involution);
  const auto fam = integral_family(sc.space, sc.params);
  std::ostringstream csv;
  csv << "state,F,G,bracket\n";
  double worst = 0;
  for (int k = 0; k < sc.samples; ++k) {
    const PhaseState x = random_state(sc.space, rng);
    for (std::size_t i = 0; i < fam.size(); ++i)
      for (std::size_t j = i + 1; j < fam.size(); ++j) {
        const double b = poisson_bracket(fam[i], fam[j], x);
        worst = std::max(worst, std::abs(b));
        csv << k << ',' << fam[i].name() << ',' << fam[j].name() << ',' << format_double(b) << '\n';
      }
  }
  r.pass = worst < sc.tol.bracket;
  r.summary = "max |{F,G}| " + sci(worst) + " (tol " + sci(sc.tol.bracket) + ") over " + std::to_string(sc.samples) +
              " states, chart " + canonical_chart_name(sc.space);
  r.detail = {{"max_bracket", worst}, {"states", sc.samples}};
  r.csv = csv.str();
  return r;
}

CheckResult check_rank(const Scenario& sc) {
  CheckResult r;
  Rng rng = check_rng(sc, Check::Rank);
  const auto fam = integral_family(sc.space, sc.params);
  std::ostringstream csv;
  csv << "state,rank,smallest_singular_value,largest_singular_value\n";
  int full = 0;
  for (int k = 0; k < sc.samples; ++k) {
    const PhaseState x = random_state(sc.space, rng);
    const Eigen::VectorXd sv = jacobian_singular_values(fam, x);
    const int rank = jacobian_rank(fam, x);
    if (rank == sc.space.n) ++full;
    csv << k << ',' << rank << ',' << format_double(sv[sv.size() - 1]) << ',' << format_double(sv[0]) << '\n';
  }
  r.pass = full == sc.samples;
  r.summary = "rank " + std::to_string(sc.space.n) + " at " + std::to_string(full) + "/" +
              std::to_string(sc.samples) + " states";
  r.detail = {{"full_rank_states", full}, {"states", sc.samples}};
  r.csv = csv.str();
  return r;
}

// Chart run with tau tracking against the curved run restarted at each
// chart sample's tau. No walls.
CheckResult check_correspondence(const Scenario& sc) {
  CheckResult r;
  const SpaceForm chart = sc.space.chart_form();
  const SpaceForm curved = sc.space.curved_form();
  PhaseState x0 = sc.space.curved() ? pull_state(sc.space, sc.initial) : sc.initial;
  x0.t = 0.0;
  FlowOptions opt = sc.flow;
  opt.track_tau = true;
  const Trajectory ct = simulate(chart, sc.params, {}, x0, {sc.horizon}, opt);
  PhaseState y = push_state(chart, x0);
  FlowOptions copt = sc.flow;
  copt.track_tau = false;
  std::ostringstream csv;
  csv << "t,tau,deviation\n";
  double worst = 0;
  std::size_t points = 0;
  std::string stopped;
  for (const Sample& s : ct.samples) {
    if (s.tau > y.t) {
      const Trajectory seg = simulate(curved, sc.params, {}, y, {s.tau - y.t}, copt);
      if (seg.status != Termination::TimeLimit) {
        stopped = std::string("curved run: ") + to_string(seg.status);
        break;
      }
      y = seg.back().state();
    }
    // relative to |q|: on the hyperboloid |q| grows like e^dist
    const double dev = (project_point(chart.branch, s.q) - y.q).norm() / std::max(1.0, y.q.norm());
    worst = std::max(worst, dev);
    ++points;
    csv << format_double(s.t) << ',' << format_double(s.tau) << ',' << format_double(dev) << '\n';
  }
  if (ct.status != Termination::TimeLimit) stopped = std::string("chart run: ") + to_string(ct.status);
  r.pass = points > 1 && worst < sc.tol.correspondence;
  r.summary = "max relative trajectory deviation " + sci(worst) + " (tol " + sci(sc.tol.correspondence) + ") at " +
              std::to_string(points) + " points to chart t=" + format_double(ct.back().t);
  if (!stopped.empty()) r.summary += " (" + stopped + ")";
  r.detail = {{"max_deviation", worst}, {"points", points}, {"t_end", ct.back().t}};
  r.csv = csv.str();
  return r;
}

CheckResult check_reflection(const Scenario& sc) {
  CheckResult r;
  Rng rng = check_rng(sc, Check::Reflection);
  const Branch b = sc.space.branch;
  std::ostringstream csv;
  csv << "wall,point,deviation\n";
  double worst = 0;
  for (const QuadricWall& w : sc.walls) {
    const QuadricWall cw = sc.space.curved() ? lift_wall(w) : w;
    const QuadricWall pw = project_wall(cw);
    for (int k = 0; k < sc.samples; ++k) {
      const Vec x = random_wall_point(cw, rng);
      const Vec v = random_tangent(cw.space, x, rng);
      const Vec lhs = push_velocity(b, x, reflect(cw.space, cw, x, v));
      const Vec rhs = reflect(pw.space, pw, project_point(b, x), push_velocity(b, x, v));
      const double dev = (lhs - rhs).norm();
      worst = std::max(worst, dev);
      csv << w.id << ',' << k << ',' << format_double(dev) << '\n';
    }
  }
  r.pass = !sc.walls.empty() && worst < sc.tol.reflection;
  r.summary = "max |project(reflect) - reflect(project)| " + sci(worst) + " (tol " + sci(sc.tol.reflection) + ") over " +
              std::to_string(sc.walls.size()) + " walls x " + std::to_string(sc.samples) + " points";
  if (sc.walls.empty()) r.summary = "no walls in scenario";
  r.detail = {{"max_deviation", worst}, {"walls", sc.walls.size()}};
  r.csv = csv.str();
  return r;
}

void write_file(const std::filesystem::path& p, const std::string& data) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << data;
  if (!f) throw std::runtime_error("write failed for " + p.string());
}

json vec_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

RunResult run_scenario(const Scenario& sc, const std::filesystem::path& out, std::ostream& log) {
  RunResult res;
  const Trajectory traj = simulate(sc.space, sc.params, sc.walls, sc.initial, sc.stop, sc.flow);
  res.status = traj.status;
  const bool partial = singular(traj.status);
  const auto fam = integral_family(sc.space, sc.params);
  const std::string tcsv = trajectory_csv(traj, fam);
  const std::string ecsv = events_csv(traj);
  res.digest = fnv1a_hex(tcsv + ecsv);

  log << "run " << to_string(traj.status) << ": t=" << format_double(traj.back().t) << ", "
      << traj.samples.size() << " samples, " << traj.events.size() << " reflections";
  if (!traj.message.empty()) log << " (" << traj.message << ")";
  log << '\n';

  json report;
  report["scenario"] = sc.doc;
  report["status"] = to_string(traj.status);
  report["message"] = traj.message;
  report["partial"] = partial;
  report["summary"] = {{"samples", traj.samples.size()}, {"events", traj.events.size()}, {"t_end", traj.back().t},
                       {"q_end", vec_json(traj.back().q)}, {"v_end", vec_json(traj.back().v)}};
  json events = json::array();
  for (const ReflectionEvent& e : traj.events)
    events.push_back({{"t", e.t_hit}, {"wall", e.wall_id}, {"q", vec_json(e.q_hit)}, {"v_in", vec_json(e.v_in)},
                      {"v_out", vec_json(e.v_out)}});
  report["events"] = events;

  int code = partial ? kSingular : kPass;
  json checks = json::object();
  std::vector<std::pair<std::string, std::string>> extra;
  for (Check c : sc.checks) {
    CheckResult cr;
    try {
      switch (c) {
        case Check::Drift: cr = check_drift(sc, traj); break;
        case Check::Involution: cr = check_involution(sc); break;
        case Check::Rank: cr = check_rank(sc); break;
        case Check::Correspondence: cr = check_correspondence(sc); break;
        case Check::Reflection: cr = check_reflection(sc); break;
      }
    } catch (const SingularityError& e) {
      cr.pass = false;
      cr.summary = std::string("singularity: ") + e.what();
    }
    log << to_string(c) << ' ' << (cr.pass ? "PASS" : "FAIL") << ' ' << cr.summary << '\n';
    json entry = {{"pass", cr.pass}, {"summary", cr.summary}};
    for (auto& [k, v] : cr.detail.items()) entry[k] = v;
    checks[to_string(c)] = entry;
    if (!cr.pass) code = combine_exit(code, kCheckFailed);
    if (!cr.csv.empty()) extra.emplace_back(std::string(to_string(c)) + ".csv", cr.csv);
  }
  report["checks"] = checks;
  report["digest"] = res.digest;
  report["exit_code"] = code;
  res.exit_code = code;
  res.report = report;

  if (!out.empty()) {
    std::filesystem::create_directories(out);
    write_file(out / "trajectory.csv", tcsv);
    write_file(out / "events.csv", ecsv);
    for (const auto& [name, data] : extra) write_file(out / name, data);
    write_file(out / "report.json", report.dump(2) + "\n");
  }
  return res;
}

SweepSpec parse_sweep(const std::string& text) {
  const std::size_t eq = text.find('=');
  const std::size_t c1 = text.find(':', eq == std::string::npos ? 0 : eq);
  const std::size_t c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (eq == std::string::npos || eq == 0 || c1 == std::string::npos || c2 == std::string::npos)
    throw ValidationError("--sweep expects field=start:stop:steps");
  SweepSpec s;
  s.field = text.substr(0, eq);
  try {
    std::size_t used = 0;
    const std::string a = text.substr(eq + 1, c1 - eq - 1), b = text.substr(c1 + 1, c2 - c1 - 1),
                      c = text.substr(c2 + 1);
    s.start = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    s.stop = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
    s.steps = std::stoi(c, &used);
    if (used != c.size()) throw std::invalid_argument(c);
  } catch (const std::exception&) {
    throw ValidationError("--sweep expects field=start:stop:steps");
  }
  if (s.steps < 1) throw ValidationError("--sweep needs at least one step");
  return s;
}

int run_sweep(const json& base, const SweepSpec& sweep, const std::filesystem::path& out, std::ostream& log,
              unsigned threads) {
  const int m = sweep.steps;
  std::vector<double> grid(m);
  for (int k = 0; k < m; ++k) grid[k] = m == 1 ? sweep.start : sweep.start + (sweep.stop - sweep.start) * k / (m - 1);

  struct Slot {
    int code = kPass;
    std::string status = "invalid", digest, log;
  };
  std::vector<Slot> slots(m);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k = next++; k < m; k = next++) {
      std::ostringstream os;
      Slot& s = slots[k];
      try {
        json doc = base;
        set_field(doc, sweep.field, grid[k]);
        const Scenario sc = load_scenario(doc);
        char dir[32];
        std::snprintf(dir, sizeof dir, "sweep_%03d", k);
        const RunResult r = run_scenario(sc, out.empty() ? out : out / dir, os);
        s.code = r.exit_code;
        s.status = to_string(r.status);
        s.digest = r.digest;
      } catch (const ValidationError& e) {
        os << "invalid: " << e.what() << '\n';
        s.code = kInvalid;
      } catch (const SingularityError& e) {
        os << "singular: " << e.what() << '\n';
        s.code = kSingular;
        s.status = "singular";
      }
      s.log = os.str();
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(m));
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  std::ostringstream csv;
  csv << "index," << sweep.field << ",exit_code,status,digest\n";
  int code = kPass;
  for (int k = 0; k < m; ++k) {
    log << "[" << k << "] " << sweep.field << "=" << format_double(grid[k]) << '\n' << slots[k].log;
    csv << k << ',' << format_double(grid[k]) << ',' << slots[k].code << ',' << slots[k].status << ','
        << slots[k].digest << '\n';
    code = combine_exit(code, slots[k].code);
  }
  if (!out.empty()) {
    std::filesystem::create_directories(out);
    write_file(out / "sweep.csv", csv.str());
  }
  return code;
}

}  // namespace lagbill::app
