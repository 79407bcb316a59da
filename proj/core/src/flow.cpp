#include "lagbill/flow.hpp"

#include <algorithm>
#include <cmath>

#include "lagbill/projection.hpp"

namespace lagbill {

const char* to_string(Termination t) noexcept {
  switch (t) {
    case Termination::TimeLimit: return "time-limit";
    case Termination::ReflectionCount: return "reflection-count";
    case Termination::Collision: return "collision";
    case Termination::Singular: return "singular";
    case Termination::Grazing: return "grazing";
    case Termination::StepUnderflow: return "step-underflow";
  }
  return "singular";
}

FlowSystem::FlowSystem(SpaceForm space, LagrangeParams params, bool track_tau)
    : space_(space),
      params_(params),
      track_tau_(track_tau),
      free_(params.m1 == 0.0 && params.m2 == 0.0 && params.f == 0.0) {
  if (track_tau_ && space_.curved())
    throw DomainError("FlowSystem: tau tracking is for chart runs (curved runs already use tau)");
}

Vec FlowSystem::pack(const PhaseState& s, double tau) const {
  require_ambient(space_, s.q, "FlowSystem::pack");
  require_ambient(space_, s.v, "FlowSystem::pack");
  Vec y(size());
  y.head(dim()) = s.q;
  y.segment(dim(), dim()) = s.v;
  if (track_tau_) y[2 * dim()] = tau;
  return y;
}

PhaseState FlowSystem::unpack(const Vec& y, double t) const {
  return {y.head(dim()), y.segment(dim(), dim()), t};
}

void FlowSystem::renormalize(Vec& y) const {
  Vec q = y.head(dim());
  Vec v = y.segment(dim(), dim());
  lagbill::renormalize(space_, q, v);
  y.head(dim()) = q;
  y.segment(dim(), dim()) = v;
}

Vec FlowSystem::rhs(double, const Vec& y) const {
  const int d = dim();
  const int n = space_.n;
  const Vec q = y.head(d);
  const Vec v = y.segment(d, d);
  Vec out(size());
  out.head(d) = v;
  switch (space_.kind) {
    case Geometry::EuclideanChart: {
      Vec qc = q;
      qc[n] = -1.0;
      out.segment(d, d) = force_chart(space_, params_, qc);
      out[n] = 0.0;
      if (track_tau_) {
        const double r2 = q.head(n).squaredNorm();
        const double nn = space_.branch == Branch::Spherical ? 1.0 + r2 : 1.0 - r2;
        if (!(nn > 0.0))
          throw SingularityError(SingularityKind::IdealBoundary, "chart run left the Klein ball");
        out[2 * d] = 1.0 / nn;
      }
      break;
    }
    case Geometry::Sphere: {
      const double qq = q.squaredNorm();
      out.segment(d, d) = -(v.squaredNorm() / qq) * q;
      if (!free_) out.segment(d, d) += force_curved(space_, params_, Vec(q / std::sqrt(qq)));
      break;
    }
    case Geometry::Hyperboloid: {
      const double qq = ambient_inner(Branch::Hyperbolic, q, q);
      if (!(qq < 0.0))
        throw SingularityError(SingularityKind::IdealBoundary, "stage point left the hyperboloid cone");
      const double vv = ambient_inner(Branch::Hyperbolic, v, v);
      out.segment(d, d) = (vv / -qq) * q;
      if (!free_) out.segment(d, d) += force_curved(space_, params_, Vec(q / std::sqrt(-qq)));
      break;
    }
  }
  return out;
}

StepResult step(const SpaceForm& space, const LagrangeParams& params, const PhaseState& state,
                double h, double rtol, double atol) {
  if (!(h > 0.0)) throw DomainError("step: h must be positive");
  const FlowSystem sys(space, params);
  Vec y = sys.pack(state);
  sys.renormalize(y);
  const Dopri5 rk(rtol, atol);
  const Dopri5::Rhs f = [&](double t, const Vec& x) { return sys.rhs(t, x); };
  StepResult r;
  r.segment = rk.attempt(f, state.t, y, f(state.t, y), h);
  Vec y1 = r.segment.y1;
  sys.renormalize(y1);
  r.state = sys.unpack(y1, state.t + h);
  r.error = r.segment.error;
  return r;
}

Vec reflect(const SpaceForm& space, const QuadricWall& wall, const Vec& q, const Vec& v,
            double grazing_cosine) {
  require_ambient(space, v, "reflect");
  const Vec nrm = normal(wall, q);
  const double vn = inner(space, v, nrm);
  const double nn = inner(space, nrm, nrm);
  const double vv = inner(space, v, v);
  if (!(nn > 0.0)) throw DomainError("reflect: degenerate wall normal");
  if (!(vv > 0.0) || std::abs(vn) < grazing_cosine * std::sqrt(vv * nn))
    throw SingularityError(SingularityKind::Grazing, "reflect: grazing hit on wall '" + wall.id + "'");
  return v - (2.0 * vn / nn) * nrm;
}

namespace {

double wall_value(const FlowSystem& sys, const QuadricWall& wall, const Vec& y) {
  Vec q = y.head(sys.dim());
  if (!sys.space().curved()) q[sys.space().n] = -1.0;
  return implicit_value(wall, q);
}

double wall_rate(const FlowSystem& sys, const QuadricWall& wall, const Vec& y) {
  Vec q = y.head(sys.dim());
  Vec v = y.segment(sys.dim(), sys.dim());
  if (!sys.space().curved()) {
    q[sys.space().n] = -1.0;
    v[sys.space().n] = 0.0;
  }
  return implicit_gradient(wall, q).dot(v);
}

// One Newton-like projection of q onto Q = 0 along the Euclidean gradient.
void snap_to_wall(const FlowSystem& sys, const QuadricWall& wall, Vec& y) {
  const int d = sys.dim();
  const int n = sys.space().n;
  Vec q = y.head(d);
  if (!sys.space().curved()) q[n] = -1.0;
  Vec g = implicit_gradient(wall, q);
  if (!sys.space().curved()) g[n] = 0.0;
  const double gg = g.squaredNorm();
  if (gg > 0.0) q -= (implicit_value(wall, q) / gg) * g;
  y.head(d) = q;
  sys.renormalize(y);
}

}  // namespace

std::optional<Crossing> detect_crossing(const FlowSystem& sys, const QuadricWall& wall,
                                        const Dopri5::Step& seg, double side,
                                        const FlowOptions& opt) {
  const int m = std::max(1, opt.scan_samples);
  int changes = 0;
  int first = -1;
  double prev_sign = side;
  for (int k = 1; k <= m; ++k) {
    const double t = seg.t0 + seg.h * static_cast<double>(k) / m;
    const double val = wall_value(sys, wall, k == m ? seg.y1 : seg.dense(t));
    const double s = val * side > 0.0 ? side : -side;
    if (s != prev_sign) {
      ++changes;
      if (first < 0) first = k;
    }
    prev_sign = s;
  }
  if (first < 0) return std::nullopt;
  if (changes > 1) throw MultipleRoots("detect_crossing: several sign changes in one step");

  // Bisection on the dense output.
  double lo = seg.t0 + seg.h * static_cast<double>(first - 1) / m;
  double hi = seg.t0 + seg.h * static_cast<double>(first) / m;
  for (int it = 0; it < opt.bisection_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (wall_value(sys, wall, seg.dense(mid)) * side > 0.0) lo = mid;
    else hi = mid;
  }

  // Newton polishing with genuine RK steps from the start of the segment.
  const Dopri5 rk(opt.rtol, opt.atol);
  const Dopri5::Rhs f = [&](double t, const Vec& x) { return sys.rhs(t, x); };
  double tc = 0.5 * (lo + hi);
  Vec yc = seg.dense(tc);
  for (int it = 0; it < 20; ++it) {
    const double dt = tc - seg.t0;
    yc = dt > 0.0 ? rk.attempt(f, seg.t0, seg.y0, seg.k1, dt).y1 : seg.y0;
    sys.renormalize(yc);
    const double val = wall_value(sys, wall, yc);
    if (std::abs(val) < opt.event_tolerance) break;
    const double rate = wall_rate(sys, wall, yc);
    if (rate == 0.0) break;
    const double next = std::clamp(tc - val / rate, seg.t0, seg.t0 + seg.h);
    if (next == tc) break;
    tc = next;
  }
  snap_to_wall(sys, wall, yc);
  return Crossing{tc, yc};
}

namespace {

Termination termination_for(SingularityKind k) {
  switch (k) {
    case SingularityKind::Collision: return Termination::Collision;
    case SingularityKind::Grazing: return Termination::Grazing;
    case SingularityKind::StepUnderflow: return Termination::StepUnderflow;
    case SingularityKind::Equator:
    case SingularityKind::IdealBoundary: return Termination::Singular;
  }
  return Termination::Singular;
}

// Step underflow this close to a massive Kepler center is a collision.
constexpr double kCollisionRadius = 1e-5;

bool near_kepler_center(const FlowSystem& sys, const Vec& q) {
  const Centers c = centers(sys.space());
  const auto close = [&](const Vec& z) { return (q - z).norm() < kCollisionRadius; };
  return (sys.params().m1 != 0.0 && close(c.z1)) || (sys.params().m2 != 0.0 && close(c.z2));
}

// Signed wall value with a guard against starting exactly on a wall.
double side_of(const FlowSystem& sys, const QuadricWall& wall, const Vec& y) {
  const double val = wall_value(sys, wall, y);
  if (val == 0.0) throw DomainError("simulate: initial point lies on wall '" + wall.id + "'");
  return val > 0.0 ? 1.0 : -1.0;
}

// Domain checks not caught by the right-hand side.
void check_state(const FlowSystem& sys, const Vec& y) {
  const SpaceForm& s = sys.space();
  const int n = s.n;
  if (s.kind == Geometry::EuclideanChart && s.branch == Branch::Hyperbolic &&
      !(y.head(n).squaredNorm() < 1.0))
    throw SingularityError(SingularityKind::IdealBoundary, "chart run left the Klein ball");
  if (s.curved() && !(y[n] < -kEquatorCutoff))
    throw SingularityError(SingularityKind::Equator,
                           s.kind == Geometry::Sphere ? "orbit reached the equator"
                                                      : "orbit left the lower sheet");
}

}  // namespace

Trajectory simulate(const SpaceForm& space, const LagrangeParams& params,
                    const std::vector<QuadricWall>& walls, const PhaseState& state0,
                    const StopCondition& stop, const FlowOptions& opt) {
  validate_walls(space, walls);
  const FlowSystem sys(space, params, opt.track_tau);
  const Dopri5 rk(opt.rtol, opt.atol);
  const Dopri5::Rhs f = [&](double t, const Vec& x) { return sys.rhs(t, x); };
  const int d = sys.dim();

  Trajectory traj;
  traj.space = space;

  double t = state0.t;
  Vec y = sys.pack(state0);
  sys.renormalize(y);

  auto record = [&](double time, const Vec& state, std::ptrdiff_t event) {
    Sample s;
    s.t = time;
    s.q = state.head(d);
    s.v = state.segment(d, d);
    if (sys.tracks_tau()) s.tau = state[2 * d];
    s.event = event;
    traj.samples.push_back(std::move(s));
  };
  auto finish = [&](Termination st, std::string msg) {
    traj.status = st;
    traj.message = std::move(msg);
    return traj;
  };

  std::vector<double> sides;
  sides.reserve(walls.size());
  try {
    check_state(sys, y);
    for (const QuadricWall& w : walls) sides.push_back(side_of(sys, w, y));
  } catch (const SingularityError& e) {
    record(t, y, -1);
    return finish(termination_for(e.kind()), e.what());
  }
  record(t, y, -1);

  if (stop.max_reflections == 0) return finish(Termination::ReflectionCount, "no reflections requested");

  Vec k1;
  try {
    k1 = f(t, y);
  } catch (const SingularityError& e) {
    return finish(termination_for(e.kind()), e.what());
  }

  double h = std::min(opt.h0, opt.h_max);
  bool last_rejected = false;
  const double t_end = state0.t + stop.t_max;
  SingularityKind last_failure = SingularityKind::StepUnderflow;
  std::string last_message = "step size underflow";

  for (std::size_t steps = 0; steps < opt.max_steps; ++steps) {
    if (t >= t_end) return finish(Termination::TimeLimit, "");
    bool final_step = false;
    if (t + h >= t_end) {
      h = t_end - t;
      final_step = true;
    }
    if (h < opt.h_min && !final_step) {
      if (near_kepler_center(sys, sys.unpack(y, t).q))
        return finish(Termination::Collision, "step size underflow at a Kepler center");
      return finish(last_failure == SingularityKind::StepUnderflow ? Termination::StepUnderflow
                                                                   : termination_for(last_failure),
                    last_message);
    }

    Dopri5::Step seg;
    try {
      seg = rk.attempt(f, t, y, k1, h);
    } catch (const SingularityError& e) {
      // A stage landed on a singular set; shrink and retry.
      last_failure = e.kind();
      last_message = e.what();
      h *= 0.25;
      last_rejected = true;
      continue;
    }
    if (seg.error > 1.0) {
      h = Dopri5::propose(h, seg.error, true);
      last_rejected = true;
      last_failure = SingularityKind::StepUnderflow;
      last_message = "step size underflow";
      continue;
    }

    // Earliest wall crossing over all walls on this step.
    std::optional<Crossing> hit;
    std::size_t hit_wall = 0;
    bool ambiguous = false;
    try {
      for (std::size_t w = 0; w < walls.size(); ++w) {
        auto c = detect_crossing(sys, walls[w], seg, sides[w], opt);
        if (c && (!hit || c->t < hit->t)) {
          hit = std::move(c);
          hit_wall = w;
        }
      }
    } catch (const MultipleRoots&) {
      ambiguous = true;
    } catch (const SingularityError& e) {
      return finish(termination_for(e.kind()), e.what());
    }
    if (ambiguous && h * 0.5 >= opt.h_min) {
      h *= 0.5;
      last_rejected = true;
      continue;
    }

    if (!hit) {
      Vec y1 = seg.y1;
      try {
        sys.renormalize(y1);
        check_state(sys, y1);
      } catch (const SingularityError& e) {
        return finish(termination_for(e.kind()), e.what());
      }
      const bool moved = (y1 - seg.y1).lpNorm<Eigen::Infinity>() > 0.0;
      t = final_step ? t_end : t + h;
      y = std::move(y1);
      try {
        k1 = moved ? f(t, y) : seg.k7;
      } catch (const SingularityError& e) {
        record(t, y, -1);
        return finish(termination_for(e.kind()), e.what());
      }
      record(t, y, -1);
      h = std::min(Dopri5::propose(seg.h, seg.error, last_rejected), opt.h_max);
      last_rejected = false;
      continue;
    }

    // Wall hit.
    const QuadricWall& wall = walls[hit_wall];
    Vec yh = hit->y;
    const double th = hit->t;
    const Vec qh = yh.head(d);
    const Vec vin = yh.segment(d, d);
    Vec vout = vin;
    const bool active = wall_active_at(wall, qh);
    std::ptrdiff_t ev = -1;
    if (active) {
      try {
        vout = reflect(space, wall, qh, vin, opt.grazing_cosine);
      } catch (const SingularityError& e) {
        record(th, yh, -1);
        return finish(termination_for(e.kind()), e.what());
      }
      traj.events.push_back({th, qh, vin, vout, wall.id, hit_wall});
      ev = static_cast<std::ptrdiff_t>(traj.events.size()) - 1;
    } else {
      sides[hit_wall] = -sides[hit_wall];
    }
    record(th, yh, ev);

    // Nudge off the wall along the outgoing velocity, advancing time to match.
    const double speed = vout.norm();
    Vec yn = yh;
    yn.segment(d, d) = vout;
    double dt = 0.0;
    for (int tries = 0; tries < 8; ++tries) {
      dt = opt.nudge * std::pow(2.0, tries) / speed;
      yn.head(d) = qh + dt * vout;
      if (sys.tracks_tau()) yn[2 * d] = yh[2 * d] + dt * sys.rhs(th, yh)[2 * d];
      sys.renormalize(yn);
      if (wall_value(sys, wall, yn) * sides[hit_wall] > 0.0) break;
    }
    t = th + dt;
    y = std::move(yn);
    try {
      check_state(sys, y);
      k1 = f(t, y);
    } catch (const SingularityError& e) {
      return finish(termination_for(e.kind()), e.what());
    }
    record(t, y, -1);
    if (traj.events.size() >= stop.max_reflections)
      return finish(Termination::ReflectionCount, "");
    h = std::min(std::max(h, 1e-6), opt.h_max);
    last_rejected = false;
  }
  return finish(Termination::StepUnderflow, "step budget exhausted");
}

Vec interpolate_position(const Trajectory& traj, double t) {
  const auto& s = traj.samples;
  if (s.empty()) throw DomainError("interpolate_position: empty trajectory");
  if (t < s.front().t || t > s.back().t)
    throw DomainError("interpolate_position: t outside the trajectory");
  auto it = std::upper_bound(s.begin(), s.end(), t, [](double x, const Sample& a) { return x < a.t; });
  if (it == s.end()) return s.back().q;
  const Sample& b = *it;
  const Sample& a = *(it - 1);
  const double h = b.t - a.t;
  if (h <= 0.0) return a.q;
  const double u = (t - a.t) / h;
  if (a.event >= 0) return a.q + u * (b.q - a.q);  // nudge segment
  const double u2 = u * u, u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u;
  const double h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
  return h00 * a.q + h10 * h * a.v + h01 * b.q + h11 * h * b.v;
}

}  // namespace lagbill
