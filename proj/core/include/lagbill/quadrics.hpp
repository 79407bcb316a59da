#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lagbill/spaceform.hpp"

namespace lagbill {

enum class WallKind { Spheroid, TwoSheetHyperboloid };
enum class Sheet { Positive, Negative, Both };

const char* to_string(WallKind k) noexcept;
const char* to_string(Sheet s) noexcept;

/// Confocal quadric wall. In the chart it is
///   x1^2/A^2 +- sum_{i>=2} xi^2/B^2 = 1,
/// on the curved models the cone q1^2/A^2 +- sum qi^2/B^2 - q_{n+1}^2 = 0
/// intersected with the surface. The foci sit at the Kepler centers of
/// `space` when focal_parameter(kind, A, B, branch) == space.a.
struct QuadricWall {
  SpaceForm space;
  WallKind kind = WallKind::Spheroid;
  double A = 1.0;
  double B = 1.0;
  Sheet sheet = Sheet::Both;  // two-sheet hyperboloid only, selected by sign of q1
  std::string id;
  /// Optional open-subset mask evaluated at a hit point; false means the
  /// particle passes through.
  std::function<bool(const Vec&)> mask;

  /// Builds a wall and checks that its foci match the space's Kepler centers.
  static QuadricWall make(const SpaceForm& space, WallKind kind, double A, double B,
                          std::string id = {}, Sheet sheet = Sheet::Both);
  /// Alternate parametrization: solve B from (a, A).
  static QuadricWall from_focus(const SpaceForm& space, WallKind kind, double A,
                                std::string id = {}, Sheet sheet = Sheet::Both);
};

/// Solves the focal relation for a >= 0:
///   spherical branch:  1 + a^2 = (A^2 + 1)/(B^2 + 1)  or  (A^2 + 1)/(1 - B^2)
///   hyperbolic branch: 1 - a^2 = (1 - A^2)/(1 - B^2)  or  (1 - A^2)/(1 + B^2)
/// Throws DomainError when no real a exists.
double focal_parameter(WallKind kind, double A, double B, Branch branch);

/// Inverse of focal_parameter for B.
double solve_shape_B(WallKind kind, double a, double A, Branch branch);

/// Homogeneous quadratic form Q(q) = q1^2/A^2 +- sum qi^2/B^2 - q_{n+1}^2.
/// Negative inside a spheroid and between the sheets of a hyperboloid.
double implicit_value(const QuadricWall& wall, const Vec& q);

/// Euclidean partial derivatives of Q with respect to ambient coordinates.
Vec implicit_gradient(const QuadricWall& wall, const Vec& q);

/// Metric normal at q: the metric gradient of Q in the chart, the
/// tangent-projected (Minkowski-raised) gradient on curved models.
Vec normal(const QuadricWall& wall, const Vec& q);

/// Sheet selection plus the optional mask.
bool wall_active_at(const QuadricWall& wall, const Vec& q);

/// Chart wall -> same (kind, A, B) on the curved model paired with its branch, and back.
QuadricWall project_wall(const QuadricWall& chart_wall);
QuadricWall lift_wall(const QuadricWall& curved_wall);

/// Foci of the wall in its own geometry (projected chart foci on curved models).
std::pair<Vec, Vec> wall_foci(const QuadricWall& wall);

/// Point on the symmetry axis lying on the wall (positive sheet).
Vec axis_vertex(const QuadricWall& wall);

/// (sum or |difference| of distances to the foci) minus the wall constant
/// read off at the axis vertex. Distances use the chart norm or the
/// geodesic distance of the curved model.
double focal_distance_residual(const QuadricWall& wall, const Vec& q);

/// Distance between two points of a space form (chart norm, great-circle or
/// hyperbolic distance).
double distance(const SpaceForm& space, const Vec& p, const Vec& q);

/// Verifies that every wall lives in `space` and shares its foci.
void validate_walls(const SpaceForm& space, const std::vector<QuadricWall>& walls,
                    double tol = 1e-9);

}  // namespace lagbill
