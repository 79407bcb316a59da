#include "lagbill/dopri5.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lagbill {

namespace {

// Butcher tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Dense output.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace

Dopri5::Step Dopri5::attempt(const Rhs& f, double t, const State& y, const State& k1,
                             double h) const {
  Step s;
  s.t0 = t;
  s.h = h;
  s.y0 = y;
  s.k1 = k1;
  const State k2 = f(t + c2 * h, y + h * (a21 * k1));
  const State k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
  const State k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  const State k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const State k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  s.y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
  s.k7 = f(t + h, s.y1);

  const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * s.k7);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double sc = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(s.y1[i]));
    const double r = err[i] / sc;
    acc += r * r;
  }
  s.error = std::sqrt(acc / static_cast<double>(y.size()));
  if (!std::isfinite(s.error)) s.error = std::numeric_limits<double>::infinity();

  const State ydiff = s.y1 - y;
  const State bspl = h * k1 - ydiff;
  s.rcont[0] = y;
  s.rcont[1] = ydiff;
  s.rcont[2] = bspl;
  s.rcont[3] = ydiff - h * s.k7 - bspl;
  s.rcont[4] = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * s.k7);
  return s;
}

Dopri5::State Dopri5::Step::dense(double t) const {
  const double theta = h != 0.0 ? (t - t0) / h : 0.0;
  const double theta1 = 1.0 - theta;
  return rcont[0] + theta * (rcont[1] + theta1 * (rcont[2] + theta * (rcont[3] + theta1 * rcont[4])));
}

double Dopri5::propose(double h, double error, bool last_rejected) {
  double fac = error > 0.0 ? 0.9 * std::pow(error, -0.2) : 10.0;
  fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 10.0);
  return h * fac;
}

}  // namespace lagbill
