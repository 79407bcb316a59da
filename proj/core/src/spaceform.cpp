#include "lagbill/spaceform.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lagbill {

const char* to_string(SingularityKind kind) noexcept {
  switch (kind) {
    case SingularityKind::Collision: return "collision";
    case SingularityKind::Equator: return "equator";
    case SingularityKind::IdealBoundary: return "ideal-boundary";
    case SingularityKind::Grazing: return "grazing";
    case SingularityKind::StepUnderflow: return "step-underflow";
  }
  return "unknown";
}

const char* to_string(Geometry g) noexcept {
  switch (g) {
    case Geometry::EuclideanChart: return "euclidean";
    case Geometry::Sphere: return "sphere";
    case Geometry::Hyperboloid: return "hyperbolic";
  }
  return "unknown";
}

const char* to_string(Branch b) noexcept {
  return b == Branch::Spherical ? "spherical" : "hyperbolic";
}

namespace {

void check_params(int n, double a, Branch branch) {
  if (n < 2) throw DimensionError("space form dimension must be >= 2");
  if (!std::isfinite(a)) throw DomainError("focal parameter a must be finite");
  if (branch == Branch::Hyperbolic && !(a * a < 1.0))
    throw DomainError("hyperbolic branch requires a^2 < 1");
}

}  // namespace

SpaceForm SpaceForm::chart(int n, double a, Branch branch) {
  check_params(n, a, branch);
  return {Geometry::EuclideanChart, n, a, branch};
}

SpaceForm SpaceForm::sphere(int n, double a) {
  check_params(n, a, Branch::Spherical);
  return {Geometry::Sphere, n, a, Branch::Spherical};
}

SpaceForm SpaceForm::hyperboloid(int n, double a) {
  check_params(n, a, Branch::Hyperbolic);
  return {Geometry::Hyperboloid, n, a, Branch::Hyperbolic};
}

double SpaceForm::focal_scale() const noexcept {
  return branch == Branch::Spherical ? 1.0 + a * a : 1.0 - a * a;
}

double SpaceForm::axis_weight() const noexcept { return 1.0 / focal_scale(); }

SpaceForm SpaceForm::chart_form() const { return chart(n, a, branch); }

SpaceForm SpaceForm::curved_form() const {
  return branch == Branch::Spherical ? sphere(n, a) : hyperboloid(n, a);
}

void require_ambient(const SpaceForm& space, const Vec& v, const char* what) {
  if (v.size() != space.ambient_dim()) {
    throw DimensionError(std::string(what) + ": expected ambient length " +
                         std::to_string(space.ambient_dim()) + ", got " +
                         std::to_string(v.size()));
  }
}

double ambient_inner(Branch branch, const Vec& u, const Vec& v) {
  if (u.size() != v.size()) throw DimensionError("ambient_inner: length mismatch");
  const Eigen::Index last = u.size() - 1;
  const double head = u.head(last).dot(v.head(last));
  return branch == Branch::Spherical ? head + u[last] * v[last] : head - u[last] * v[last];
}

double inner(const SpaceForm& space, const Vec& u, const Vec& v) {
  require_ambient(space, u, "inner");
  require_ambient(space, v, "inner");
  switch (space.kind) {
    case Geometry::EuclideanChart: {
      const int n = space.n;
      return space.axis_weight() * u[0] * v[0] + u.segment(1, n - 1).dot(v.segment(1, n - 1));
    }
    case Geometry::Sphere: return u.dot(v);
    case Geometry::Hyperboloid: return ambient_inner(Branch::Hyperbolic, u, v);
  }
  return 0.0;
}

double norm(const SpaceForm& space, const Vec& v) {
  const double q = inner(space, v, v);
  if (space.kind == Geometry::Hyperboloid) {
    const double scale = v.squaredNorm();
    if (scale > 0.0 && std::abs(q) <= 1e-14 * scale)
      throw DomainError("norm: null Minkowski vector");
  }
  return std::sqrt(std::abs(q));
}

double surface_residual(const SpaceForm& space, const Vec& q) {
  require_ambient(space, q, "surface_residual");
  const Eigen::Index last = space.n;
  switch (space.kind) {
    case Geometry::EuclideanChart: return q[last] + 1.0;
    case Geometry::Sphere: return q.squaredNorm() - 1.0;
    case Geometry::Hyperboloid: return ambient_inner(Branch::Hyperbolic, q, q) + 1.0;
  }
  return 0.0;
}

bool on_surface(const SpaceForm& space, const Vec& q, double tol) {
  if (!q.allFinite()) return false;
  // relative to |q|^2: far out on the hyperboloid the residual carries that much round-off
  const double scale = space.kind == Geometry::EuclideanChart ? 1.0 : std::max(1.0, q.squaredNorm());
  if (std::abs(surface_residual(space, q)) >= tol * scale) return false;
  if (space.kind == Geometry::Hyperboloid && !(q[space.n] < 0.0)) return false;
  return true;
}

Vec tangent_project(const SpaceForm& space, const Vec& q, const Vec& w) {
  require_ambient(space, q, "tangent_project");
  require_ambient(space, w, "tangent_project");
  switch (space.kind) {
    case Geometry::EuclideanChart: {
      Vec out = w;
      out[space.n] = 0.0;
      return out;
    }
    case Geometry::Sphere:
    case Geometry::Hyperboloid:
      if (!on_surface(space, q, 1e-8)) throw DomainError("tangent_project: point off surface");
      break;
  }
  // Divide by <q,q> instead of assuming +-1 so the projection stays
  // idempotent for points carrying integration round-off.
  const Branch b = space.kind == Geometry::Sphere ? Branch::Spherical : Branch::Hyperbolic;
  const double qq = ambient_inner(b, q, q);
  return w - (ambient_inner(b, w, q) / qq) * q;
}

void renormalize(const SpaceForm& space, Vec& q, Vec& v) {
  switch (space.kind) {
    case Geometry::EuclideanChart:
      q[space.n] = -1.0;
      v[space.n] = 0.0;
      return;
    case Geometry::Sphere:
      q /= q.norm();
      break;
    case Geometry::Hyperboloid: {
      const double qq = ambient_inner(Branch::Hyperbolic, q, q);
      if (!(qq < 0.0)) throw SingularityError(SingularityKind::IdealBoundary, "renormalize: point left the hyperboloid cone");
      q /= std::sqrt(-qq);
      break;
    }
  }
  v = tangent_project(space, q, v);
}

AngleParts center_angle_parts(const SpaceForm& space, const Vec& q, const Vec& z) {
  require_ambient(space, q, "center_angle");
  require_ambient(space, z, "center_angle");
  switch (space.kind) {
    case Geometry::Sphere: {
      const double c = q.dot(z);
      if (std::abs(c) > 1.0 + 1e-10) throw DomainError("center_angle: |<q,Z>| > 1");
      return {c, (q - c * z).norm()};
    }
    case Geometry::Hyperboloid: {
      const double c = -ambient_inner(Branch::Hyperbolic, q, z);
      const Vec perp = q - c * z;
      return {c, std::sqrt(std::max(0.0, ambient_inner(Branch::Hyperbolic, perp, perp)))};
    }
    case Geometry::EuclideanChart:
      break;
  }
  throw DomainError("center_angle: defined on the sphere and the hyperboloid only");
}

double center_angle(const SpaceForm& space, const Vec& q, const Vec& z) {
  const AngleParts p = center_angle_parts(space, q, z);
  if (space.kind == Geometry::Sphere) return std::atan2(p.s, p.c);
  return std::asinh(p.s);
}

}  // namespace lagbill
