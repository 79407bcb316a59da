#pragma once

#include <cstdint>
#include <random>

#include "lagbill/flow.hpp"

namespace lagbill {

using Rng = std::mt19937_64;

/// Chart state -> state on the paired curved model (point projected,
/// velocity pushed to d/dtau), and back.
PhaseState push_state(const SpaceForm& chart, const PhaseState& s);
PhaseState pull_state(const SpaceForm& curved, const PhaseState& s);

struct SampleBox {
  double radius = 1.2;       // chart points drawn from |x_i| <= radius (shrunk inside the Klein ball)
  double speed = 1.0;        // chart velocity components drawn from [-speed, speed]
  double center_gap = 0.2;   // minimum chart distance to Z1, Z2
  double axis_gap = 0.1;     // minimum distance from the x1 axis
};

/// Generic chart state away from the Kepler centers and the symmetry axis.
PhaseState random_chart_state(const SpaceForm& chart, Rng& rng, const SampleBox& box = {});
/// Generic state on any geometry (pushed from a chart sample when curved).
PhaseState random_state(const SpaceForm& space, Rng& rng, const SampleBox& box = {});

/// Point on the wall: spheroids via (A cos s, B sin s u), two-sheet walls via
/// (+-A cosh s, B sinh s u) with u a random unit lateral direction.
/// Curved walls get the projected chart point.
Vec random_wall_point(const QuadricWall& wall, Rng& rng, double max_param = 1.5);

/// Random tangent vector at q of unit length in the space metric.
Vec random_tangent(const SpaceForm& space, const Vec& q, Rng& rng);

}  // namespace lagbill
