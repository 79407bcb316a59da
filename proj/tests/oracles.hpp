#pragma once
// Independent reference formulas. Nothing here calls into the library's
// force or reflection code; they are written from the closed forms.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>

#include <Eigen/Core>

namespace oracle {

using Vec = Eigen::VectorXd;

inline double minkowski(const Vec& u, const Vec& v) {
  const Eigen::Index n = u.size() - 1;
  return u.head(n).dot(v.head(n)) - u[n] * v[n];
}

inline Vec chart_point(std::initializer_list<double> xs) {
  Vec q(static_cast<Eigen::Index>(xs.size()) + 1);
  Eigen::Index i = 0;
  for (double x : xs) q[i++] = x;
  q[i] = -1.0;
  return q;
}

/// Central differences, h = rel * (1 + |x_i|).
inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double rel = 1e-5) {
  Vec g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = rel * (1.0 + std::abs(x[i]));
    Vec p = x, m = x;
    p[i] += h;
    m[i] -= h;
    g[i] = (f(p) - f(m)) / (2.0 * h);
  }
  return g;
}

/// Surface gradient of  mh1 cot th1 + mh2 cot th2 + f tan^2 th0  on the unit
/// sphere (hyperbolic = false) or of the coth/tanh^2 version on the
/// hyperboloid. Both reduce to
///   sum_k mh_k (Z_k - c_k q)/s_k^3  -  2 f (Z0 - c0 q)/c0^3
/// with c = cos/cosh and s = sin/sinh of the center angle.
inline Vec curved_force_gradient(bool hyperbolic, double mh1, double mh2, double f, const Vec& q,
                                 const Vec& z0, const Vec& z1, const Vec& z2) {
  auto cos_like = [&](const Vec& z) { return hyperbolic ? -minkowski(q, z) : q.dot(z); };
  auto sin_like = [&](double c) { return hyperbolic ? std::sqrt(c * c - 1.0) : std::sqrt(1.0 - c * c); };
  Vec out = Vec::Zero(q.size());
  const double c1 = cos_like(z1), c2 = cos_like(z2), c0 = cos_like(z0);
  const double s1 = sin_like(c1), s2 = sin_like(c2);
  out += mh1 * (z1 - c1 * q) / (s1 * s1 * s1);
  out += mh2 * (z2 - c2 * q) / (s2 * s2 * s2);
  out -= 2.0 * f * (z0 - c0 * q) / (c0 * c0 * c0);
  return out;
}

/// Smallest root t > t_min of Q(q0 + t v) = 0 for the homogeneous quadric
/// Q = x1^2/A^2 + sgn rho^2/B^2 - q_{n+1}^2 along a chart straight line.
inline std::optional<double> line_quadric_root(double A, double B, double sgn, const Vec& q0,
                                               const Vec& v, double t_min = 0.0) {
  const Eigen::Index n = q0.size() - 1;
  auto form = [&](const Vec& a, const Vec& b) {
    double s = a[0] * b[0] / (A * A);
    for (Eigen::Index i = 1; i < n; ++i) s += sgn * a[i] * b[i] / (B * B);
    return s;
  };
  const double alpha = form(v, v);
  const double beta = 2.0 * form(q0, v);
  const double gamma = form(q0, q0) - 1.0;
  const double disc = beta * beta - 4.0 * alpha * gamma;
  if (disc < 0.0 || alpha == 0.0) return std::nullopt;
  const double r = std::sqrt(disc);
  double t1 = (-beta - r) / (2.0 * alpha), t2 = (-beta + r) / (2.0 * alpha);
  if (t1 > t2) std::swap(t1, t2);
  if (t1 > t_min) return t1;
  if (t2 > t_min) return t2;
  return std::nullopt;
}

/// Circular Kepler orbit r = 1 around the origin in the (x1, x2) plane with
/// mass m: q(t) = (cos wt, sin wt), w = sqrt(m).
struct CircularOrbit {
  double m;
  double omega() const { return std::sqrt(m); }
  double period() const { return 2.0 * std::numbers::pi / omega(); }
};

/// Chart spheroid reflection written component-wise at (x, y, 0):
///   n = (x(1+a^2)/A^2, y/B^2, 0),  s = <xdot, n>_a = xdot x/A^2 + ydot y/B^2,
///   d = <n, n>_a = x^2 (1+a^2)/A^4 + y^2/B^4,
///   v = (xdot - 2 s x (1+a^2)/(A^2 d), ydot - 2 s y/(B^2 d), zdot).
inline Eigen::Vector3d spheroid_reflection(double a, double A, double B, double x, double y,
                                           const Eigen::Vector3d& qd) {
  const double s = qd[0] * x / (A * A) + qd[1] * y / (B * B);
  const double d = x * x * (1.0 + a * a) / (A * A * A * A) + y * y / (B * B * B * B);
  return {qd[0] - 2.0 * s * x * (1.0 + a * a) / (A * A * d), qd[1] - 2.0 * s * y / (B * B * d), qd[2]};
}

/// Projection of the curved wall normal into the chart (sphere, n = 3):
///   n = Dlift * N,  N = (2q1/A^2, 2q2/B^2, 2q3/B^2, -2q4),
///   Dlift = [ -I/q4 | q_{1..3}/q4^2 ].
inline Eigen::Vector3d projected_wall_normal(double A, double B, const Vec& q) {
  Eigen::Vector4d N(2 * q[0] / (A * A), 2 * q[1] / (B * B), 2 * q[2] / (B * B), -2 * q[3]);
  Eigen::Vector3d out;
  for (int i = 0; i < 3; ++i) out[i] = -N[i] / q[3] + q[i] / (q[3] * q[3]) * N[3];
  return out;
}

}  // namespace oracle
