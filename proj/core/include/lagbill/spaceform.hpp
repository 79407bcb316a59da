#pragma once

#include <Eigen/Core>

#include "lagbill/errors.hpp"

namespace lagbill {

/// Ambient coordinate vector of length n+1. Points and velocities are stored
/// this way for every geometry, including the flat chart.
using Vec = Eigen::VectorXd;

enum class Geometry { EuclideanChart, Sphere, Hyperboloid };

/// Which curved model a chart is paired with. It fixes the sign in the
/// anisotropic chart norm (1 + a^2 for the sphere, 1 - a^2 for the
/// hyperboloid) and the ambient form used by the central projection.
enum class Branch { Spherical, Hyperbolic };

const char* to_string(Geometry g) noexcept;
const char* to_string(Branch b) noexcept;

inline constexpr double kSurfaceTolerance = 1e-10;
inline constexpr double kEquatorCutoff = 1e-12;

struct SpaceForm {
  Geometry kind = Geometry::EuclideanChart;
  int n = 3;        // intrinsic dimension
  double a = 0.0;   // focal half-separation in the chart
  Branch branch = Branch::Spherical;

  static SpaceForm chart(int n, double a, Branch branch = Branch::Spherical);
  static SpaceForm sphere(int n, double a);
  static SpaceForm hyperboloid(int n, double a);

  int ambient_dim() const noexcept { return n + 1; }
  bool curved() const noexcept { return kind != Geometry::EuclideanChart; }

  /// Weight of the first coordinate in the chart norm: 1/(1 + a^2) or 1/(1 - a^2).
  double axis_weight() const noexcept;
  /// 1 + a^2 on the spherical branch, 1 - a^2 on the hyperbolic one.
  double focal_scale() const noexcept;

  /// Flat chart paired with this space (identity for a chart).
  SpaceForm chart_form() const;
  /// Curved model paired with this space (identity for curved spaces).
  SpaceForm curved_form() const;

  bool operator==(const SpaceForm&) const = default;
};

/// Throws DimensionError unless v has length n+1.
void require_ambient(const SpaceForm& space, const Vec& v, const char* what);

/// Euclidean or Minkowski form on R^{n+1}, independent of the chart metric.
double ambient_inner(Branch branch, const Vec& u, const Vec& v);

/// Metric of the space form on ambient vectors.
///   chart:       u1 v1/(1 +- a^2) + sum_{i=2..n} ui vi   (last slot ignored)
///   sphere:      Euclidean dot product on R^{n+1}
///   hyperboloid: sum_{i<=n} ui vi - u_{n+1} v_{n+1}
double inner(const SpaceForm& space, const Vec& u, const Vec& v);

/// sqrt(|inner(v, v)|). On the hyperboloid a nonzero null vector throws.
double norm(const SpaceForm& space, const Vec& v);

/// Deviation of the defining quadratic form: |q|^2 - 1 on the sphere,
/// <q,q>_M + 1 on the hyperboloid (plus a sign check on q_{n+1}), and
/// q_{n+1} + 1 in the chart.
double surface_residual(const SpaceForm& space, const Vec& q);
bool on_surface(const SpaceForm& space, const Vec& q, double tol = kSurfaceTolerance);

/// Orthogonal projection onto T_q. The chart just zeroes the last coordinate.
Vec tangent_project(const SpaceForm& space, const Vec& q, const Vec& w);

/// Rescale q along its ray back onto the surface and re-tangentialize v.
void renormalize(const SpaceForm& space, Vec& q, Vec& v);

/// Spherical angle in [0, pi] with cos = <q, Z>, or hyperbolic angle >= 0
/// with cosh = -<q, Z>_M.
double center_angle(const SpaceForm& space, const Vec& q, const Vec& z);

/// cos/sin (cosh/sinh) of center_angle, computed without going through
/// the angle. The sine part is the norm of the component of q orthogonal to z.
struct AngleParts {
  double c;
  double s;
};
AngleParts center_angle_parts(const SpaceForm& space, const Vec& q, const Vec& z);

}  // namespace lagbill
