#include "lagbill/integrals.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "lagbill/projection.hpp"

namespace lagbill {

namespace {

void require_kind(const SpaceForm& s, bool ok, const char* what) {
  if (!ok) throw DomainError(std::string(what) + ": not defined on " + to_string(s.kind));
}

void check_index(const SpaceForm& s, int idx, const char* what) {
  if (idx < 1 || idx > s.n) throw DomainError(std::string(what) + ": index out of range");
}

double inv_sqrt_checked(double d, double m, int which) {
  if (m != 0.0 && d < kCollisionCutoff * kCollisionCutoff)
    throw SingularityError(SingularityKind::Collision, "integral evaluated at Kepler center Z" + std::to_string(which));
  return 1.0 / std::sqrt(d);
}

double sum_L2(const Vec& x, const Vec& xd, int from, int to) {
  // from/to are 0-based inclusive bounds.
  double acc = 0.0;
  for (int i = from; i <= to; ++i)
    for (int j = i + 1; j <= to; ++j) {
      const double l = x[i] * xd[j] - xd[i] * x[j];
      acc += l * l;
    }
  return acc;
}

}  // namespace

FirstIntegral FirstIntegral::make(IntegralId id, const SpaceForm& space, const LagrangeParams& params,
                                  int i, int j) {
  FirstIntegral F{id, space, params, i, j};
  const bool chart = !space.curved();
  switch (id) {
    case IntegralId::Esp: require_kind(space, chart, "E_sp"); break;
    case IntegralId::EsphChart:
      require_kind(space, chart && space.branch == Branch::Spherical, "E_sph_chart");
      break;
    case IntegralId::EhypChart:
      require_kind(space, chart && space.branch == Branch::Hyperbolic, "E_hyp_chart");
      break;
    case IntegralId::Esph: require_kind(space, space.kind == Geometry::Sphere, "E_sph"); break;
    case IntegralId::Ehyp: require_kind(space, space.kind == Geometry::Hyperboloid, "E_hyp"); break;
    case IntegralId::EspHat: require_kind(space, !chart, "E_sp_hat"); break;
    case IntegralId::L:
    case IntegralId::LHat:
      require_kind(space, chart == (id == IntegralId::L), id == IntegralId::L ? "L" : "L_hat");
      check_index(space, i, "L_ij");
      check_index(space, j, "L_ij");
      if (i == j) throw DomainError("L_ij: needs i != j");
      break;
    case IntegralId::C:
    case IntegralId::CHat:
      require_kind(space, chart == (id == IntegralId::C), id == IntegralId::C ? "C" : "C_hat");
      if (i < 3 || i > space.n) throw DomainError("C_k: needs 3 <= k <= n");
      break;
  }
  return F;
}

std::string FirstIntegral::name() const {
  switch (id) {
    case IntegralId::Esp: return "E_sp";
    case IntegralId::EsphChart: return "E_sph_chart";
    case IntegralId::EhypChart: return "E_hyp_chart";
    case IntegralId::Esph: return "E_sph";
    case IntegralId::Ehyp: return "E_hyp";
    case IntegralId::EspHat: return "E_sp_hat";
    case IntegralId::L: return "L_" + std::to_string(i) + std::to_string(j);
    case IntegralId::LHat: return "L_hat_" + std::to_string(i) + std::to_string(j);
    case IntegralId::C: return "C_" + std::to_string(i);
    case IntegralId::CHat: return "C_hat_" + std::to_string(i);
  }
  return "?";
}

double FirstIntegral::operator()(const PhaseState& s) const { return eval(*this, s); }

double angular_momentum(const PhaseState& s, int i, int j) {
  const Eigen::Index n = s.q.size() - 1;
  if (i < 1 || j < 1 || i > n || j > n || s.v.size() != s.q.size())
    throw DomainError("angular_momentum: index out of range");
  return s.q[i - 1] * s.v[j - 1] - s.v[i - 1] * s.q[j - 1];
}

double casimir_C(const PhaseState& s, int k) {
  const Eigen::Index n = s.q.size() - 1;
  if (k < 3 || k > n) throw DomainError("casimir_C: needs 3 <= k <= n");
  return sum_L2(s.q, s.v, 1, k - 1);
}

double kinetic_sph_chart_quadratic(const Vec& x, const Vec& xd) {
  const Eigen::Index n = x.size();
  const double r2 = x.squaredNorm();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    acc += (1.0 + r2 - x[i] * x[i]) * xd[i] * xd[i];
    for (Eigen::Index j = i + 1; j < n; ++j) acc -= 2.0 * x[i] * x[j] * xd[i] * xd[j];
  }
  return 0.5 * acc;
}

double kinetic_sph_chart_angular(const Vec& x, const Vec& xd) {
  return 0.5 * (xd.squaredNorm() + sum_L2(x, xd, 0, static_cast<int>(x.size()) - 1));
}

double energy_chart(const SpaceForm& chart, const LagrangeParams& p, const PhaseState& s) {
  require_kind(chart, !chart.curved(), "energy_chart");
  return 0.5 * inner(chart, s.v, s.v) - force_function_chart(chart, p, s.q);
}

double energy_curved(const SpaceForm& space, const LagrangeParams& p, const PhaseState& s) {
  require_kind(space, space.curved(), "energy_curved");
  return 0.5 * inner(space, s.v, s.v) - force_function_curved(space, p, s.q);
}

double energy_curved_in_chart(const SpaceForm& chart, const LagrangeParams& p, const PhaseState& s) {
  require_kind(chart, !chart.curved(), "energy_curved_in_chart");
  require_ambient(chart, s.q, "energy_curved_in_chart");
  const int n = chart.n;
  const Vec x = s.q.head(n);
  const Vec xd = s.v.head(n);
  const double a = chart.a;
  const double x1 = x[0];
  const double rho2 = x.tail(n - 1).squaredNorm();
  const double scale = chart.focal_scale();
  const double mh1 = hatted_mass(chart, p.m1);
  const double mh2 = hatted_mass(chart, p.m2);
  const double L2 = sum_L2(x, xd, 0, n - 1);

  double kinetic = 0.0;
  double c1 = 0.0, c2 = 0.0;  // cot or coth numerators
  if (chart.branch == Branch::Spherical) {
    kinetic = 0.5 * (xd.squaredNorm() + L2);
    c1 = 1.0 + a * x1;
    c2 = 1.0 - a * x1;
  } else {
    if (!(x.squaredNorm() < 1.0))
      throw SingularityError(SingularityKind::IdealBoundary, "E_hyp_chart: outside the Klein ball");
    kinetic = 0.5 * (xd.squaredNorm() - L2);
    c1 = 1.0 - a * x1;
    c2 = 1.0 + a * x1;
  }
  const double d1 = (x1 - a) * (x1 - a) + scale * rho2;
  const double d2 = (x1 + a) * (x1 + a) + scale * rho2;
  double e = kinetic - p.f * x.squaredNorm();
  if (mh1 != 0.0) e -= mh1 * c1 * inv_sqrt_checked(d1, mh1, 1);
  if (mh2 != 0.0) e -= mh2 * c2 * inv_sqrt_checked(d2, mh2, 2);
  return e;
}

double energy_chart_on_curved(const SpaceForm& space, const LagrangeParams& p, const PhaseState& s) {
  require_kind(space, space.curved(), "energy_chart_on_curved");
  require_ambient(space, s.q, "energy_chart_on_curved");
  const int n = space.n;
  const Vec& q = s.q;
  const Vec& v = s.v;
  const double qn = q[n];
  if (!(qn < -kEquatorCutoff))
    throw SingularityError(SingularityKind::Equator, "E_sp_hat: needs q_{n+1} < 0");
  const double w = space.axis_weight();
  const double a = space.a;

  double kin = 0.0;
  for (int i = 0; i < n; ++i) {
    const double c = qn * v[i] - q[i] * v[n];
    kin += (i == 0 ? w : 1.0) * c * c;
  }
  const double x1 = -q[0] / qn;
  double rho2 = 0.0;
  for (int i = 1; i < n; ++i) rho2 += q[i] * q[i] / (qn * qn);
  double e = 0.5 * kin - p.f * (w * x1 * x1 + rho2);
  if (p.m1 != 0.0) e -= p.m1 * inv_sqrt_checked(w * (x1 - a) * (x1 - a) + rho2, p.m1, 1);
  if (p.m2 != 0.0) e -= p.m2 * inv_sqrt_checked(w * (x1 + a) * (x1 + a) + rho2, p.m2, 2);
  return e;
}

double eval(const FirstIntegral& F, const PhaseState& s) {
  require_ambient(F.space, s.q, "eval");
  require_ambient(F.space, s.v, "eval");
  switch (F.id) {
    case IntegralId::Esp: return energy_chart(F.space, F.params, s);
    case IntegralId::EsphChart:
    case IntegralId::EhypChart: return energy_curved_in_chart(F.space, F.params, s);
    case IntegralId::Esph:
    case IntegralId::Ehyp: return energy_curved(F.space, F.params, s);
    case IntegralId::EspHat: return energy_chart_on_curved(F.space, F.params, s);
    case IntegralId::L:
    case IntegralId::LHat: return angular_momentum(s, F.i, F.j);
    case IntegralId::C:
    case IntegralId::CHat: return casimir_C(s, F.i);
  }
  throw DomainError("eval: unknown integral");
}

std::vector<FirstIntegral> integral_family(const SpaceForm& space, const LagrangeParams& params) {
  std::vector<FirstIntegral> out;
  const bool chart = !space.curved();
  if (chart) {
    out.push_back(FirstIntegral::make(IntegralId::Esp, space, params));
    out.push_back(FirstIntegral::make(
        space.branch == Branch::Spherical ? IntegralId::EsphChart : IntegralId::EhypChart, space, params));
  } else {
    out.push_back(FirstIntegral::make(
        space.kind == Geometry::Sphere ? IntegralId::Esph : IntegralId::Ehyp, space, params));
    out.push_back(FirstIntegral::make(IntegralId::EspHat, space, params));
  }
  if (space.n == 3) {
    out.push_back(FirstIntegral::make(chart ? IntegralId::L : IntegralId::LHat, space, params, 2, 3));
  } else {
    for (int k = 3; k <= space.n; ++k)
      out.push_back(FirstIntegral::make(chart ? IntegralId::C : IntegralId::CHat, space, params, k));
  }
  return out;
}

// Canonical coordinates -------------------------------------------------------

namespace {

struct ChartFrame {
  double N = 1.0;
  Eigen::MatrixXd J;  // dq/dx, (n+1) x n
  Eigen::MatrixXd g;  // induced metric, n x n
};

ChartFrame frame_at(const SpaceForm& space, const Vec& x) {
  const int n = space.n;
  ChartFrame fr;
  const double r2 = x.squaredNorm();
  const bool sph = space.kind == Geometry::Sphere;
  const double nn = sph ? 1.0 + r2 : 1.0 - r2;
  if (!(nn > 0.0)) throw SingularityError(SingularityKind::IdealBoundary, "canonical chart: outside the Klein ball");
  fr.N = std::sqrt(nn);
  Vec xt(n + 1);
  xt.head(n) = x;
  xt[n] = -1.0;
  const Vec dN = (sph ? 1.0 : -1.0) * x / fr.N;
  fr.J = Eigen::MatrixXd::Zero(n + 1, n);
  fr.J.topRows(n) = Eigen::MatrixXd::Identity(n, n) / fr.N;
  fr.J -= xt * dN.transpose() / (fr.N * fr.N);
  Eigen::MatrixXd MJ = fr.J;
  if (!sph) MJ.row(n) *= -1.0;
  fr.g = fr.J.transpose() * MJ;
  return fr;
}

}  // namespace

const char* canonical_chart_name(const SpaceForm& space) noexcept {
  switch (space.kind) {
    case Geometry::EuclideanChart: return "affine";
    case Geometry::Sphere: return "gnomonic";
    case Geometry::Hyperboloid: return "klein";
  }
  return "affine";
}

Eigen::VectorXd to_canonical(const SpaceForm& space, const PhaseState& s) {
  require_ambient(space, s.q, "to_canonical");
  require_ambient(space, s.v, "to_canonical");
  const int n = space.n;
  Eigen::VectorXd z(2 * n);
  if (!space.curved()) {
    z.head(n) = s.q.head(n);
    z.tail(n) = s.v.head(n);
    z[n] *= space.axis_weight();
    return z;
  }
  const Vec xt = lift_point(s.q);
  const Vec x = xt.head(n);
  const ChartFrame fr = frame_at(space, x);
  const Vec u = (fr.N * fr.N) * pull_velocity(s.q, s.v).head(n);
  z.head(n) = x;
  z.tail(n) = fr.g * u;
  return z;
}

PhaseState from_canonical(const SpaceForm& space, const Eigen::VectorXd& z, double t) {
  const int n = space.n;
  if (z.size() != 2 * n) throw DimensionError("from_canonical: expected 2n coordinates");
  PhaseState s;
  s.t = t;
  s.q = Vec::Zero(n + 1);
  s.v = Vec::Zero(n + 1);
  if (!space.curved()) {
    s.q.head(n) = z.head(n);
    s.q[n] = -1.0;
    s.v.head(n) = z.tail(n);
    s.v[0] /= space.axis_weight();
    return s;
  }
  const Vec x = z.head(n);
  const ChartFrame fr = frame_at(space, x);
  Vec xt(n + 1);
  xt.head(n) = x;
  xt[n] = -1.0;
  s.q = xt / fr.N;
  const Vec u = fr.g.ldlt().solve(Vec(z.tail(n)));
  s.v = fr.J * u;
  return s;
}

Eigen::VectorXd canonical_gradient(const SpaceForm& space, const PhaseFunction& F,
                                   const PhaseState& s, const DifferenceOptions& opt) {
  const Eigen::VectorXd z = to_canonical(space, s);
  Eigen::VectorXd g(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double h = opt.rel_step * (1.0 + std::abs(z[i]));
    Eigen::VectorXd zp = z, zm = z;
    zp[i] += h;
    zm[i] -= h;
    g[i] = (F(from_canonical(space, zp, s.t)) - F(from_canonical(space, zm, s.t))) / (2.0 * h);
  }
  return g;
}

double poisson_bracket(const SpaceForm& space, const PhaseFunction& F, const PhaseFunction& G,
                       const PhaseState& s, const DifferenceOptions& opt) {
  const int n = space.n;
  const Eigen::VectorXd gf = canonical_gradient(space, F, s, opt);
  const Eigen::VectorXd gg = canonical_gradient(space, G, s, opt);
  return gf.head(n).dot(gg.tail(n)) - gf.tail(n).dot(gg.head(n));
}

double poisson_bracket(const FirstIntegral& F, const FirstIntegral& G, const PhaseState& s,
                       const DifferenceOptions& opt) {
  if (!(F.space == G.space)) throw DomainError("poisson_bracket: integrals live on different spaces");
  return poisson_bracket(F.space, PhaseFunction(F), PhaseFunction(G), s, opt);
}

Eigen::VectorXd jacobian_singular_values(const std::vector<FirstIntegral>& integrals,
                                         const PhaseState& s, const DifferenceOptions& opt) {
  if (integrals.empty()) return Eigen::VectorXd();
  const SpaceForm& space = integrals.front().space;
  Eigen::MatrixXd M(static_cast<Eigen::Index>(integrals.size()), 2 * space.n);
  for (std::size_t r = 0; r < integrals.size(); ++r) {
    if (!(integrals[r].space == space)) throw DomainError("jacobian_rank: mixed spaces");
    M.row(static_cast<Eigen::Index>(r)) = canonical_gradient(space, PhaseFunction(integrals[r]), s, opt).transpose();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  return svd.singularValues();
}

int jacobian_rank(const std::vector<FirstIntegral>& integrals, const PhaseState& s, double rel_tol,
                  const DifferenceOptions& opt) {
  const Eigen::VectorXd sv = jacobian_singular_values(integrals, s, opt);
  if (sv.size() == 0 || !(sv[0] > 0.0)) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > rel_tol * sv[0]) ++r;
  return r;
}

std::vector<DriftRow> drift_report(const Trajectory& traj, const std::vector<FirstIntegral>& integrals) {
  std::vector<DriftRow> rows;
  rows.reserve(integrals.size());
  for (const FirstIntegral& F : integrals) {
    DriftRow row;
    row.name = F.name();
    if (traj.samples.empty()) {
      rows.push_back(std::move(row));
      continue;
    }
    row.initial = F(traj.samples.front().state());
    const double scale = std::max(1.0, std::abs(row.initial));
    for (const Sample& s : traj.samples)
      row.max_drift = std::max(row.max_drift, std::abs(F(s.state()) - row.initial) / scale);
    for (const ReflectionEvent& e : traj.events) {
      const double before = F({e.q_hit, e.v_in, e.t_hit});
      const double after = F({e.q_hit, e.v_out, e.t_hit});
      row.max_jump = std::max(row.max_jump, std::abs(after - before) / scale);
      row.drift_at_events.push_back(std::abs(after - row.initial) / scale);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace lagbill
