#pragma once

#include <array>
#include <functional>

#include <Eigen/Core>

namespace lagbill {

/// Dormand-Prince 5(4) with FSAL and Hairer's fourth-order continuous
/// extension. Stateless: the caller owns step-size control so that it can
/// renormalize or cut steps at events between attempts.
class Dopri5 {
public:
  using State = Eigen::VectorXd;
  using Rhs = std::function<State(double, const State&)>;

  struct Step {
    double t0 = 0.0;
    double h = 0.0;
    State y0;
    State y1;
    State k1;    // f(t0, y0)
    State k7;    // f(t0 + h, y1)
    double error = 0.0;  // scaled RMS norm, accept when <= 1
    std::array<State, 5> rcont;

    /// Continuous extension at t in [t0, t0 + h].
    State dense(double t) const;
  };

  Dopri5(double rtol, double atol) : rtol_(rtol), atol_(atol) {}

  /// One attempt of size h from (t, y) with k1 = f(t, y) already known.
  Step attempt(const Rhs& f, double t, const State& y, const State& k1, double h) const;

  /// Standard controller: 0.9 err^(-1/5), clamped to [0.2, 10] (no growth after a rejection).
  static double propose(double h, double error, bool last_rejected);

  double rtol() const noexcept { return rtol_; }
  double atol() const noexcept { return atol_; }

private:
  double rtol_;
  double atol_;
};

}  // namespace lagbill
