#include "lagbill/sampling.hpp"

#include <cmath>
#include <numbers>

#include "lagbill/projection.hpp"

namespace lagbill {

PhaseState push_state(const SpaceForm& chart, const PhaseState& s) {
  if (chart.curved()) throw DomainError("push_state: expects a chart state");
  return {project_point(chart.branch, s.q), push_velocity(chart.branch, s.q, s.v), s.t};
}

PhaseState pull_state(const SpaceForm& curved, const PhaseState& s) {
  if (!curved.curved()) throw DomainError("pull_state: expects a curved state");
  return {lift_point(s.q), pull_velocity(s.q, s.v), s.t};
}

namespace {

Vec random_unit(int dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec u(dim);
  do {
    for (int i = 0; i < dim; ++i) u[i] = g(rng);
  } while (u.norm() < 1e-8);
  return u / u.norm();
}

}  // namespace

PhaseState random_chart_state(const SpaceForm& chart, Rng& rng, const SampleBox& box) {
  if (chart.curved()) throw DomainError("random_chart_state: expects a chart");
  const int n = chart.n;
  const bool hyp = chart.branch == Branch::Hyperbolic;
  const double r = hyp ? std::min(box.radius, 0.85 / std::sqrt(static_cast<double>(n))) : box.radius;
  std::uniform_real_distribution<double> pos(-r, r), vel(-box.speed, box.speed);
  const SpaceForm c = chart;
  PhaseState s;
  s.q = Vec::Zero(n + 1);
  s.v = Vec::Zero(n + 1);
  s.q[n] = -1.0;
  for (int attempt = 0; attempt < 100000; ++attempt) {
    for (int i = 0; i < n; ++i) s.q[i] = pos(rng);
    const double rho = s.q.segment(1, n - 1).norm();
    const double d1 = std::hypot(s.q[0] - c.a, rho);
    const double d2 = std::hypot(s.q[0] + c.a, rho);
    if (rho < box.axis_gap || d1 < box.center_gap || d2 < box.center_gap) continue;
    if (hyp && s.q.head(n).squaredNorm() > 0.81) continue;
    break;
  }
  for (int i = 0; i < n; ++i) s.v[i] = vel(rng);
  return s;
}

PhaseState random_state(const SpaceForm& space, Rng& rng, const SampleBox& box) {
  if (!space.curved()) return random_chart_state(space, rng, box);
  return push_state(space.chart_form(), random_chart_state(space.chart_form(), rng, box));
}

Vec random_wall_point(const QuadricWall& wall, Rng& rng, double max_param) {
  const SpaceForm chart = wall.space.chart_form();
  const int n = chart.n;
  const bool hyp = chart.branch == Branch::Hyperbolic;
  std::uniform_real_distribution<double> par(wall.kind == WallKind::Spheroid ? 0.05 : 0.0,
                                             wall.kind == WallKind::Spheroid ? std::numbers::pi - 0.05 : max_param);
  std::bernoulli_distribution coin(0.5);
  Vec q = Vec::Zero(n + 1);
  q[n] = -1.0;
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const double s = par(rng);
    const Vec u = random_unit(n - 1, rng);
    if (wall.kind == WallKind::Spheroid) {
      q[0] = wall.A * std::cos(s);
      q.segment(1, n - 1) = wall.B * std::sin(s) * u;
    } else {
      double sign = 1.0;
      if (wall.sheet == Sheet::Negative) sign = -1.0;
      else if (wall.sheet == Sheet::Both && coin(rng)) sign = -1.0;
      q[0] = sign * wall.A * std::cosh(s);
      q.segment(1, n - 1) = wall.B * std::sinh(s) * u;
    }
    if (hyp && !(q.head(n).squaredNorm() < 0.95)) continue;
    break;
  }
  return wall.space.curved() ? project_point(chart.branch, q) : q;
}

Vec random_tangent(const SpaceForm& space, const Vec& q, Rng& rng) {
  for (;;) {
    Vec w = random_unit(space.n + 1, rng);
    if (!space.curved()) w[space.n] = 0.0;
    w = tangent_project(space, q, w);
    const double nn = inner(space, w, w);
    if (nn > 1e-6) return w / std::sqrt(nn);
  }
}

}  // namespace lagbill
