#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lagbill/flow.hpp"

namespace lagbill {

/// Which first integral. The chart energies carry their branch in the name:
/// EsphChart is the spherical energy written in the chart (spherical branch),
/// EhypChart its hyperbolic counterpart.
enum class IntegralId { Esp, EsphChart, EhypChart, Esph, Ehyp, EspHat, L, C, LHat, CHat };

struct FirstIntegral {
  IntegralId id = IntegralId::Esp;
  SpaceForm space;
  LagrangeParams params;
  int i = 0;  // L, LHat: 1-based (i, j); C, CHat: k in i
  int j = 0;

  static FirstIntegral make(IntegralId id, const SpaceForm& space, const LagrangeParams& params,
                            int i = 0, int j = 0);
  std::string name() const;
  double operator()(const PhaseState& s) const;
};

/// Evaluates the integral; throws DomainError for a geometry mismatch and
/// SingularityError on its singular set.
double eval(const FirstIntegral& F, const PhaseState& s);

// Building blocks -----------------------------------------------------------

/// L_ij = q_i v_j - v_i q_j with 1-based indices 1 <= i, j <= n.
double angular_momentum(const PhaseState& s, int i, int j);
/// C_k = sum_{2 <= i < j <= k} L_ij^2, 3 <= k <= n.
double casimir_C(const PhaseState& s, int k);

/// Chart kinetic part of the spherical energy, as a quadratic form in xdot:
///   1/2 [ sum_i (1 + sum_{k != i} x_k^2) xdot_i^2 - 2 sum_{i<j} x_i x_j xdot_i xdot_j ].
double kinetic_sph_chart_quadratic(const Vec& x, const Vec& xdot);
/// The same via angular momenta: 1/2 (|xdot|^2 + sum_{i<j} L_ij^2).
double kinetic_sph_chart_angular(const Vec& x, const Vec& xdot);

/// Energy-like integrals.
double energy_chart(const SpaceForm& chart, const LagrangeParams& p, const PhaseState& s);
double energy_curved(const SpaceForm& space, const LagrangeParams& p, const PhaseState& s);
/// Curved energy expressed in the chart (sphere or hyperboloid by branch).
double energy_curved_in_chart(const SpaceForm& chart, const LagrangeParams& p, const PhaseState& s);
/// Chart energy expressed on the curved model through ambient coordinates.
double energy_chart_on_curved(const SpaceForm& space, const LagrangeParams& p, const PhaseState& s);

/// Independent set of n integrals in involution for the geometry:
///   chart:   E_sp, chart-form curved energy, then L_23 (n = 3) or C_3..C_n (n >= 4)
///   curved:  own energy, E_sp hat, then L^_23 or C^_3..C^_n
std::vector<FirstIntegral> integral_family(const SpaceForm& space, const LagrangeParams& params);

// Canonical coordinates -------------------------------------------------------

/// z = (x, p) in R^{2n}. The chart uses x = q_{1..n} and p = g v with
/// g = diag(1/(1 +- a^2), 1, ...). Curved models use the intrinsic central
/// chart x = q_{1..n}/(-q_{n+1}) (gnomonic / Klein) with the induced metric.
Eigen::VectorXd to_canonical(const SpaceForm& space, const PhaseState& s);
PhaseState from_canonical(const SpaceForm& space, const Eigen::VectorXd& z, double t = 0.0);
/// Name of the chart used for brackets ("affine", "gnomonic", "klein").
const char* canonical_chart_name(const SpaceForm& space) noexcept;

using PhaseFunction = std::function<double(const PhaseState&)>;

struct DifferenceOptions {
  double rel_step = 1e-5;  // h_i = rel_step * (1 + |z_i|)
};

/// Gradient with respect to canonical coordinates by central differences.
Eigen::VectorXd canonical_gradient(const SpaceForm& space, const PhaseFunction& F,
                                   const PhaseState& s, const DifferenceOptions& opt = {});

/// {F, G} = sum_i (dF/dx_i dG/dp_i - dF/dp_i dG/dx_i).
double poisson_bracket(const SpaceForm& space, const PhaseFunction& F, const PhaseFunction& G,
                       const PhaseState& s, const DifferenceOptions& opt = {});
double poisson_bracket(const FirstIntegral& F, const FirstIntegral& G, const PhaseState& s,
                       const DifferenceOptions& opt = {});

/// Numerical rank of the stacked gradients (singular values above rel_tol * max).
int jacobian_rank(const std::vector<FirstIntegral>& integrals, const PhaseState& s,
                  double rel_tol = 1e-8, const DifferenceOptions& opt = {});
/// Singular values of the same matrix, descending.
Eigen::VectorXd jacobian_singular_values(const std::vector<FirstIntegral>& integrals,
                                         const PhaseState& s, const DifferenceOptions& opt = {});

// Drift along trajectories ---------------------------------------------------

struct DriftRow {
  std::string name;
  double initial = 0.0;
  double max_drift = 0.0;  // max |F(t) - F(0)| / max(1, |F(0)|) over samples
  double max_jump = 0.0;   // max |F(q, v_out) - F(q, v_in)| / max(1, |F(0)|) over events
  std::vector<double> drift_at_events;  // after each reflection
};

std::vector<DriftRow> drift_report(const Trajectory& traj, const std::vector<FirstIntegral>& integrals);

}  // namespace lagbill
