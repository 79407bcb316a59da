#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lagbill/dopri5.hpp"
#include "lagbill/forces.hpp"
#include "lagbill/quadrics.hpp"

namespace lagbill {

/// Point and velocity in ambient coordinates. t is chart time in the chart
/// and the curved time tau on the sphere/hyperboloid.
struct PhaseState {
  Vec q;
  Vec v;
  double t = 0.0;
};

struct ReflectionEvent {
  double t_hit = 0.0;
  Vec q_hit;
  Vec v_in;
  Vec v_out;
  std::string wall_id;
  std::size_t wall_index = 0;
};

enum class Termination { TimeLimit, ReflectionCount, Collision, Singular, Grazing, StepUnderflow };
const char* to_string(Termination t) noexcept;

struct Sample {
  double t = 0.0;
  Vec q;
  Vec v;
  double tau = std::numeric_limits<double>::quiet_NaN();  // only with track_tau
  // Index into Trajectory::events when this sample is a hit point (v is v_in).
  std::ptrdiff_t event = -1;

  PhaseState state() const { return {q, v, t}; }
};

struct Trajectory {
  SpaceForm space;
  std::vector<Sample> samples;
  std::vector<ReflectionEvent> events;
  Termination status = Termination::TimeLimit;
  std::string message;

  const Sample& front() const { return samples.front(); }
  const Sample& back() const { return samples.back(); }
};

struct StopCondition {
  double t_max = 1.0;
  std::size_t max_reflections = std::numeric_limits<std::size_t>::max();
};

struct FlowOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h0 = 1e-3;
  double h_min = 1e-14;
  double h_max = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 50'000'000;
  /// Chart runs only: integrate tau with dtau/dt = |q~|^-2 as an extra state.
  bool track_tau = false;
  int scan_samples = 8;
  int bisection_iterations = 40;
  double event_tolerance = 1e-12;
  double nudge = 1e-12;
  double grazing_cosine = 1e-10;
};

/// Newton's equations packed as y = (q, v[, tau]) with length 2(n+1)[+1].
/// The curved right-hand side is
///   sphere:      q'' = F_S(q) - (|v|^2/|q|^2) q
///   hyperboloid: q'' = F_S(q) + (<v,v>_M / -<q,q>_M) q
/// with F_S taken at the stage point rescaled onto the surface.
class FlowSystem {
public:
  FlowSystem(SpaceForm space, LagrangeParams params, bool track_tau = false);

  Vec rhs(double t, const Vec& y) const;
  Vec pack(const PhaseState& s, double tau = 0.0) const;
  PhaseState unpack(const Vec& y, double t) const;
  /// Curved: rescale q onto the surface and re-tangentialize v. Chart: reset last slots.
  void renormalize(Vec& y) const;

  const SpaceForm& space() const noexcept { return space_; }
  const LagrangeParams& params() const noexcept { return params_; }
  bool tracks_tau() const noexcept { return track_tau_; }
  int dim() const noexcept { return space_.n + 1; }
  Eigen::Index size() const noexcept { return 2 * dim() + (track_tau_ ? 1 : 0); }

private:
  SpaceForm space_;
  LagrangeParams params_;
  bool track_tau_;
  bool free_;  // geodesic flow, no singular set
};

struct StepResult {
  PhaseState state;
  double error = 0.0;  // scaled error estimate (<= 1 means within tolerance)
  Dopri5::Step segment;
};

/// One DOPRI5 step of size h, renormalized afterwards. Does not reject.
StepResult step(const SpaceForm& space, const LagrangeParams& params, const PhaseState& state,
                double h, double rtol = 1e-10, double atol = 1e-12);

/// Elastic reflection v' = v - 2 <v,n>/<n,n> n in the metric of wall.space.
/// Throws SingularityError(Grazing) for |<v,n>| / (|v||n|) < grazing_cosine.
Vec reflect(const SpaceForm& space, const QuadricWall& wall, const Vec& q, const Vec& v,
            double grazing_cosine = 1e-10);

struct Crossing {
  double t = 0.0;
  Vec y;  // packed state at the hit, snapped onto the wall
};

/// Raised by detect_crossing when the sub-sample scan sees more than one
/// sign change in a step; simulate halves the step and searches again.
struct MultipleRoots : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Earliest sign change of implicit_value(wall, q(t)) away from `side`
/// (+1 or -1) on an accepted step, refined by bisection on the dense output
/// and Newton polishing with real RK steps from seg.y0.
std::optional<Crossing> detect_crossing(const FlowSystem& sys, const QuadricWall& wall,
                                        const Dopri5::Step& seg, double side,
                                        const FlowOptions& opt = {});

/// Billiard run. Events with masked/inactive wall points pass through.
Trajectory simulate(const SpaceForm& space, const LagrangeParams& params,
                    const std::vector<QuadricWall>& walls, const PhaseState& state0,
                    const StopCondition& stop, const FlowOptions& opt = {});

/// Cubic Hermite interpolation of positions between consecutive samples.
/// At a hit sample the incoming velocity is used for the arc that ends there.
Vec interpolate_position(const Trajectory& traj, double t);

}  // namespace lagbill
