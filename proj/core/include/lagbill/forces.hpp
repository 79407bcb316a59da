#pragma once

#include "lagbill/spaceform.hpp"

namespace lagbill {

/// Mass factors of the Lagrange problem, given for the chart system.
/// Positive m attracts, negative f attracts (the force function enters the
/// energy with a minus sign). The focal parameter lives on the SpaceForm.
struct LagrangeParams {
  double m1 = 0.0;
  double m2 = 0.0;
  double f = 0.0;

  bool operator==(const LagrangeParams&) const = default;
};

inline constexpr double kCollisionCutoff = 1e-9;

/// Centers Z0 (Hooke), Z1, Z2 (Kepler) in ambient coordinates.
struct Centers {
  Vec z0, z1, z2;
};

/// Chart centers (0,...,-1), (a,0,...,-1), (-a,0,...,-1). For a curved
/// space these are projected onto the surface.
Centers centers(const SpaceForm& space);

/// m_hat = m sqrt(1 +- a^2): curved-system masses of the projected problem.
double hatted_mass(const SpaceForm& space, double m);

// Chart (flat) system --------------------------------------------------------

/// U = m1/|q-Z1|_a + m2/|q-Z2|_a + f |q-Z0|_a^2.
double force_function_chart(const SpaceForm& chart, const LagrangeParams& p, const Vec& q);

/// Metric gradient of force_function_chart:
///   -m1 |q-Z1|_a^-3 (q-Z1) - m2 |q-Z2|_a^-3 (q-Z2) + 2 f (q-Z0).
Vec force_chart(const SpaceForm& chart, const LagrangeParams& p, const Vec& q);

// Curved system --------------------------------------------------------------

/// Sphere: m^1 cot th1 + m^2 cot th2 + f tan^2 th0 (hatted masses).
/// Hyperboloid: the same with coth and tanh^2.
/// whole_sphere adds the antipodal centers with sign-flipped factors.
double force_function_curved(const SpaceForm& space, const LagrangeParams& p, const Vec& q,
                             bool whole_sphere = false);

/// Tangent projection of |q~|^3 F_W(q~) at the lifted chart point.
Vec force_curved(const SpaceForm& space, const LagrangeParams& p, const Vec& q);

/// Dispatches on the geometry.
Vec force(const SpaceForm& space, const LagrangeParams& p, const Vec& q);
double force_function(const SpaceForm& space, const LagrangeParams& p, const Vec& q);

}  // namespace lagbill
