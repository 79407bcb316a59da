#include "lagbill/forces.hpp"

#include <cmath>

#include "lagbill/projection.hpp"

namespace lagbill {

namespace {

Vec chart_center(int n, double x) {
  Vec z = Vec::Zero(n + 1);
  z[0] = x;
  z[n] = -1.0;
  return z;
}

void require_chart(const SpaceForm& space, const char* what) {
  if (space.kind != Geometry::EuclideanChart)
    throw DomainError(std::string(what) + ": requires the Euclidean chart");
}

void require_curved(const SpaceForm& space, const char* what) {
  if (!space.curved()) throw DomainError(std::string(what) + ": requires a curved space form");
}

double chart_distance(const SpaceForm& chart, const Vec& q, const Vec& z) {
  const Vec d = q - z;
  return std::sqrt(inner(chart, d, d));
}

void check_collision(double dist, double mass, int which) {
  if (mass != 0.0 && dist < kCollisionCutoff) {
    throw SingularityError(SingularityKind::Collision,
                           "collision with Kepler center Z" + std::to_string(which));
  }
}

}  // namespace

Centers centers(const SpaceForm& space) {
  Centers c{chart_center(space.n, 0.0), chart_center(space.n, space.a),
            chart_center(space.n, -space.a)};
  if (space.curved()) {
    c.z0 = project_point(space.branch, c.z0);
    c.z1 = project_point(space.branch, c.z1);
    c.z2 = project_point(space.branch, c.z2);
  }
  return c;
}

double hatted_mass(const SpaceForm& space, double m) {
  return m * std::sqrt(space.focal_scale());
}

double force_function_chart(const SpaceForm& chart, const LagrangeParams& p, const Vec& q) {
  require_chart(chart, "force_function_chart");
  require_ambient(chart, q, "force_function_chart");
  const Centers c = centers(chart);
  const double r1 = chart_distance(chart, q, c.z1);
  const double r2 = chart_distance(chart, q, c.z2);
  check_collision(r1, p.m1, 1);
  check_collision(r2, p.m2, 2);
  const Vec d0 = q - c.z0;
  double u = p.f * inner(chart, d0, d0);
  if (p.m1 != 0.0) u += p.m1 / r1;
  if (p.m2 != 0.0) u += p.m2 / r2;
  return u;
}

Vec force_chart(const SpaceForm& chart, const LagrangeParams& p, const Vec& q) {
  require_chart(chart, "force_chart");
  require_ambient(chart, q, "force_chart");
  const Centers c = centers(chart);
  Vec out = 2.0 * p.f * (q - c.z0);
  if (p.m1 != 0.0) {
    const Vec d = q - c.z1;
    const double r = chart_distance(chart, q, c.z1);
    check_collision(r, p.m1, 1);
    out -= (p.m1 / (r * r * r)) * d;
  }
  if (p.m2 != 0.0) {
    const Vec d = q - c.z2;
    const double r = chart_distance(chart, q, c.z2);
    check_collision(r, p.m2, 2);
    out -= (p.m2 / (r * r * r)) * d;
  }
  out[chart.n] = 0.0;
  return out;
}

double force_function_curved(const SpaceForm& space, const LagrangeParams& p, const Vec& q,
                             bool whole_sphere) {
  require_curved(space, "force_function_curved");
  require_ambient(space, q, "force_function_curved");
  if (whole_sphere && space.kind != Geometry::Sphere)
    throw DomainError("force_function_curved: whole-sphere form needs the sphere");
  if (!whole_sphere && !(q[space.n] < -kEquatorCutoff))
    throw SingularityError(SingularityKind::Equator, "force_function_curved: outside the lower hemisphere/sheet");

  const Centers c = centers(space);
  const double mh1 = hatted_mass(space, p.m1);
  const double mh2 = hatted_mass(space, p.m2);
  const bool sph = space.kind == Geometry::Sphere;

  // cot (coth) of the center angle from its cos/sin parts.
  auto kepler = [&](double m, const Vec& z, int which) {
    if (m == 0.0) return 0.0;
    const AngleParts ap = center_angle_parts(space, q, z);
    if (ap.s < kCollisionCutoff) {
      throw SingularityError(SingularityKind::Collision,
                             "collision with Kepler center Z" + std::to_string(which));
    }
    return m * ap.c / ap.s;
  };
  auto hooke = [&](const Vec& z) {
    if (p.f == 0.0) return 0.0;
    const AngleParts ap = center_angle_parts(space, q, z);
    if (std::abs(ap.c) < kEquatorCutoff)
      throw SingularityError(SingularityKind::Equator, "Hooke term singular on the equator");
    return p.f * (ap.s * ap.s) / (ap.c * ap.c);
  };

  double u = kepler(mh1, c.z1, 1) + kepler(mh2, c.z2, 2) + hooke(c.z0);
  if (whole_sphere && sph) {
    u -= kepler(mh1, Vec(-c.z1), 1);
    u -= kepler(mh2, Vec(-c.z2), 2);
    u -= hooke(Vec(-c.z0));
  }
  return u;
}

Vec force_curved(const SpaceForm& space, const LagrangeParams& p, const Vec& q) {
  require_curved(space, "force_curved");
  require_ambient(space, q, "force_curved");
  const SpaceForm chart = space.chart_form();
  const Vec chart_q = lift_point(q);
  if (space.kind == Geometry::Hyperboloid && !(chart_q.head(space.n).squaredNorm() < 1.0))
    throw SingularityError(SingularityKind::IdealBoundary, "force_curved: lifted point outside the Klein ball");
  const double nrm = chart_point_norm(space.branch, chart_q);
  const Vec fw = force_chart(chart, p, chart_q);
  return tangent_project(space, q, (nrm * nrm * nrm) * fw);
}

Vec force(const SpaceForm& space, const LagrangeParams& p, const Vec& q) {
  return space.curved() ? force_curved(space, p, q) : force_chart(space, p, q);
}

double force_function(const SpaceForm& space, const LagrangeParams& p, const Vec& q) {
  return space.curved() ? force_function_curved(space, p, q) : force_function_chart(space, p, q);
}

}  // namespace lagbill
