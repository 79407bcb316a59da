#include "lagbill/projection.hpp"

#include <cmath>

namespace lagbill {

namespace {

void require_chart_slice(const Vec& chart_q, const char* what) {
  if (chart_q.size() < 3) throw DimensionError(std::string(what) + ": ambient length must be >= 3");
  if (std::abs(chart_q[chart_q.size() - 1] + 1.0) > kSurfaceTolerance)
    throw DomainError(std::string(what) + ": point is not in the chart slice q_{n+1} = -1");
}

}  // namespace

double chart_point_norm(Branch target, const Vec& chart_q) {
  const double qq = ambient_inner(target, chart_q, chart_q);
  if (target == Branch::Hyperbolic) {
    if (!(qq < 0.0))
      throw DomainError("chart point outside the Klein ball (Minkowski norm not timelike)");
    return std::sqrt(-qq);
  }
  return std::sqrt(qq);
}

Vec project_point(Branch target, const Vec& chart_q) {
  require_chart_slice(chart_q, "project_point");
  return chart_q / chart_point_norm(target, chart_q);
}

Vec lift_point(const Vec& q) {
  const double last = q[q.size() - 1];
  if (!(last < -kEquatorCutoff))
    throw SingularityError(SingularityKind::Equator, "lift_point: point on or above the equator");
  Vec out = q / (-last);
  out[q.size() - 1] = -1.0;
  return out;
}

Vec push_velocity(Branch target, const Vec& chart_q, const Vec& chart_v) {
  require_chart_slice(chart_q, "push_velocity");
  if (chart_v.size() != chart_q.size()) throw DimensionError("push_velocity: length mismatch");
  const double nrm = chart_point_norm(target, chart_q);
  // d|q~|/dt = <q~, q~dot> / |q~| with the sign of the ambient form.
  const double sign = target == Branch::Spherical ? 1.0 : -1.0;
  const double nrm_dot = sign * ambient_inner(target, chart_q, chart_v) / nrm;
  Vec out = nrm * chart_v - nrm_dot * chart_q;
  return out;
}

Vec pull_velocity(const Vec& q, const Vec& curved_v) {
  if (curved_v.size() != q.size()) throw DimensionError("pull_velocity: length mismatch");
  const Vec chart_q = lift_point(q);
  const Eigen::Index last = q.size() - 1;
  // The last slot of q' carries d|q~|/dt; the chart velocity has none.
  Vec out = (-q[last]) * (curved_v + curved_v[last] * chart_q);
  out[last] = 0.0;
  return out;
}

double time_rescale_factor(Branch target, const Vec& chart_q) {
  require_chart_slice(chart_q, "time_rescale_factor");
  const double nrm = chart_point_norm(target, chart_q);
  if (!(nrm > 0.0)) throw DomainError("time_rescale_factor: zero norm");
  return nrm * nrm;
}

}  // namespace lagbill
