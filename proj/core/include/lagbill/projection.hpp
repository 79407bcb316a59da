#pragma once

#include "lagbill/spaceform.hpp"

namespace lagbill {

// Central projection from the origin between the affine chart
// {q_{n+1} = -1} and the lower hemisphere (Branch::Spherical) or the lower
// sheet of the hyperboloid (Branch::Hyperbolic). Chart time t and curved
// time tau are related by d/dtau = |q~|^2 d/dt.

/// Ambient norm of a chart point: Euclidean, or Minkowski sqrt(1 - |x|^2).
double chart_point_norm(Branch target, const Vec& chart_q);

Vec project_point(Branch target, const Vec& chart_q);

/// Inverse of project_point: q / (-q_{n+1}). Throws SingularityError at the equator.
Vec lift_point(const Vec& q);

/// q' = |q~| q~dot - (d|q~|/dt) q~ : the tau-velocity at project_point(q~).
Vec push_velocity(Branch target, const Vec& chart_q, const Vec& chart_v);

/// Chart velocity dq~/dt for a tau-velocity at a curved point.
Vec pull_velocity(const Vec& q, const Vec& curved_v);

/// |q~|^2 = dt/dtau.
double time_rescale_factor(Branch target, const Vec& chart_q);

}  // namespace lagbill
