#include "lagbill/quadrics.hpp"

#include <cmath>

#include "lagbill/forces.hpp"
#include "lagbill/projection.hpp"

namespace lagbill {

const char* to_string(WallKind k) noexcept {
  return k == WallKind::Spheroid ? "spheroid" : "two-sheet-hyperboloid";
}

const char* to_string(Sheet s) noexcept {
  switch (s) {
    case Sheet::Positive: return "positive";
    case Sheet::Negative: return "negative";
    case Sheet::Both: return "both";
  }
  return "both";
}

namespace {

double sheet_sign(WallKind k) { return k == WallKind::Spheroid ? 1.0 : -1.0; }

void check_shape(double A, double B) {
  if (!(A > 0.0) || !(B > 0.0) || !std::isfinite(A) || !std::isfinite(B))
    throw DomainError("quadric: A and B must be positive and finite");
}

}  // namespace

double focal_parameter(WallKind kind, double A, double B, Branch branch) {
  check_shape(A, B);
  const double A2 = A * A, B2 = B * B;
  double a2 = 0.0;
  if (branch == Branch::Spherical) {
    if (kind == WallKind::Spheroid) {
      a2 = (A2 + 1.0) / (B2 + 1.0) - 1.0;
    } else {
      if (!(B2 < 1.0)) throw DomainError("focal_parameter: two-sheet wall needs B < 1 on the spherical branch");
      a2 = (A2 + 1.0) / (1.0 - B2) - 1.0;
    }
  } else {
    if (!(A2 < 1.0)) throw DomainError("focal_parameter: hyperbolic branch needs A < 1 (vertex inside the Klein ball)");
    if (kind == WallKind::Spheroid) {
      if (!(B2 < 1.0)) throw DomainError("focal_parameter: hyperbolic spheroid needs B < 1");
      a2 = 1.0 - (1.0 - A2) / (1.0 - B2);
    } else {
      a2 = 1.0 - (1.0 - A2) / (1.0 + B2);
    }
  }
  // A = B gives a round sphere; allow round-off below zero.
  if (a2 < 0.0) {
    if (a2 > -1e-14) a2 = 0.0;
    else throw DomainError("focal_parameter: inconsistent (A, B), no real focal parameter");
  }
  return std::sqrt(a2);
}

double solve_shape_B(WallKind kind, double a, double A, Branch branch) {
  if (!(A > 0.0)) throw DomainError("solve_shape_B: A must be positive");
  const double A2 = A * A, a2 = a * a;
  double B2 = 0.0;
  if (branch == Branch::Spherical) {
    B2 = kind == WallKind::Spheroid ? (A2 + 1.0) / (1.0 + a2) - 1.0
                                    : 1.0 - (A2 + 1.0) / (1.0 + a2);
  } else {
    if (!(a2 < 1.0)) throw DomainError("solve_shape_B: hyperbolic branch needs a^2 < 1");
    B2 = kind == WallKind::Spheroid ? 1.0 - (1.0 - A2) / (1.0 - a2)
                                    : (1.0 - A2) / (1.0 - a2) - 1.0;
  }
  if (!(B2 > 0.0)) throw DomainError("solve_shape_B: no positive B for this (a, A)");
  return std::sqrt(B2);
}

QuadricWall QuadricWall::make(const SpaceForm& space, WallKind kind, double A, double B,
                              std::string id, Sheet sheet) {
  QuadricWall w;
  w.space = space;
  w.kind = kind;
  w.A = A;
  w.B = B;
  w.sheet = kind == WallKind::Spheroid ? Sheet::Both : sheet;
  w.id = std::move(id);
  const double a = focal_parameter(kind, A, B, space.branch);
  if (std::abs(a - std::abs(space.a)) > 1e-9 * std::max(1.0, a)) {
    throw DomainError("quadric wall '" + w.id + "' has focal parameter " + std::to_string(a) +
                      " but the space form uses a = " + std::to_string(space.a));
  }
  return w;
}

QuadricWall QuadricWall::from_focus(const SpaceForm& space, WallKind kind, double A,
                                    std::string id, Sheet sheet) {
  return make(space, kind, A, solve_shape_B(kind, space.a, A, space.branch), std::move(id), sheet);
}

double implicit_value(const QuadricWall& wall, const Vec& q) {
  require_ambient(wall.space, q, "implicit_value");
  const int n = wall.space.n;
  const double lateral = q.segment(1, n - 1).squaredNorm();
  return q[0] * q[0] / (wall.A * wall.A) + sheet_sign(wall.kind) * lateral / (wall.B * wall.B) -
         q[n] * q[n];
}

Vec implicit_gradient(const QuadricWall& wall, const Vec& q) {
  require_ambient(wall.space, q, "implicit_gradient");
  const int n = wall.space.n;
  Vec g(n + 1);
  g[0] = 2.0 * q[0] / (wall.A * wall.A);
  g.segment(1, n - 1) = (2.0 * sheet_sign(wall.kind) / (wall.B * wall.B)) * q.segment(1, n - 1);
  g[n] = -2.0 * q[n];
  return g;
}

Vec normal(const QuadricWall& wall, const Vec& q) {
  const SpaceForm& space = wall.space;
  Vec g = implicit_gradient(wall, q);
  Vec out;
  switch (space.kind) {
    case Geometry::EuclideanChart:
      // Raise the index with the inverse chart metric diag(1 +- a^2, 1, ..., 1).
      g[0] *= space.focal_scale();
      g[space.n] = 0.0;
      out = g;
      break;
    case Geometry::Sphere:
      out = tangent_project(space, q, g);
      break;
    case Geometry::Hyperboloid:
      g[space.n] = -g[space.n];
      out = tangent_project(space, q, g);
      break;
  }
  if (!(out.norm() > 0.0)) throw DomainError("normal: degenerate point (zero gradient)");
  return out;
}

bool wall_active_at(const QuadricWall& wall, const Vec& q) {
  if (wall.kind == WallKind::TwoSheetHyperboloid) {
    if (wall.sheet == Sheet::Positive && !(q[0] > 0.0)) return false;
    if (wall.sheet == Sheet::Negative && !(q[0] < 0.0)) return false;
  }
  if (wall.mask && !wall.mask(q)) return false;
  return true;
}

QuadricWall project_wall(const QuadricWall& chart_wall) {
  if (chart_wall.space.curved()) throw DomainError("project_wall: expects a chart wall");
  QuadricWall w = chart_wall;
  w.space = chart_wall.space.curved_form();
  return w;
}

QuadricWall lift_wall(const QuadricWall& curved_wall) {
  if (!curved_wall.space.curved()) throw DomainError("lift_wall: expects a curved wall");
  QuadricWall w = curved_wall;
  w.space = curved_wall.space.chart_form();
  return w;
}

std::pair<Vec, Vec> wall_foci(const QuadricWall& wall) {
  const Centers c = centers(wall.space);
  return {c.z1, c.z2};
}

Vec axis_vertex(const QuadricWall& wall) {
  const int n = wall.space.n;
  Vec v = Vec::Zero(n + 1);
  v[0] = wall.A;
  v[n] = -1.0;
  if (wall.space.curved()) v = project_point(wall.space.branch, v);
  return v;
}

double distance(const SpaceForm& space, const Vec& p, const Vec& q) {
  if (space.kind == Geometry::EuclideanChart) {
    const Vec d = p - q;
    return std::sqrt(inner(space, d, d));
  }
  return center_angle(space, p, q);
}

double focal_distance_residual(const QuadricWall& wall, const Vec& q) {
  const auto [f1, f2] = wall_foci(wall);
  auto focal = [&](const Vec& x) {
    const double d1 = distance(wall.space, x, f1);
    const double d2 = distance(wall.space, x, f2);
    return wall.kind == WallKind::Spheroid ? d1 + d2 : std::abs(d1 - d2);
  };
  return focal(q) - focal(axis_vertex(wall));
}

void validate_walls(const SpaceForm& space, const std::vector<QuadricWall>& walls, double tol) {
  for (const QuadricWall& w : walls) {
    if (w.space.kind != space.kind || w.space.n != space.n || w.space.branch != space.branch)
      throw DomainError("wall '" + w.id + "' lives in a different space form");
    const double a = focal_parameter(w.kind, w.A, w.B, space.branch);
    if (std::abs(a - std::abs(space.a)) > tol * std::max(1.0, a)) {
      throw DomainError("wall '" + w.id + "' does not share the foci (a = " + std::to_string(a) +
                        ", expected " + std::to_string(space.a) + ")");
    }
  }
}

}  // namespace lagbill
