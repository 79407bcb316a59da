#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "lagbill/integrals.hpp"
#include "lagbill/projection.hpp"
#include "lagbill/sampling.hpp"
#include "oracles.hpp"

using namespace lagbill;
using oracle::chart_point;

namespace {

const LagrangeParams kParams{1.0, 0.8, -0.3};

std::vector<SpaceForm> all_geometries(int n, double a) {
  return {SpaceForm::chart(n, a), SpaceForm::chart(n, a, Branch::Hyperbolic), SpaceForm::sphere(n, a),
          SpaceForm::hyperboloid(n, a)};
}

int kronecker(int i, int j) { return i == j ? 1 : 0; }

}  // namespace

TEST(Integrals, EvalExamples) {
  const SpaceForm c = SpaceForm::chart(3, 1.0);
  const PhaseState s{chart_point({0.3, 0.4, 0.5}), Vec(Eigen::Vector4d(1, 0, 0, 0)), 0};
  EXPECT_DOUBLE_EQ(eval(FirstIntegral::make(IntegralId::Esp, c, {}), s), 0.25);
  const PhaseState l{chart_point({0, 1, 0}), Vec(Eigen::Vector4d(0, 0, 1, 0)), 0};
  EXPECT_DOUBLE_EQ(eval(FirstIntegral::make(IntegralId::L, c, {}, 2, 3), l), 1.0);
  EXPECT_DOUBLE_EQ(angular_momentum(l, 3, 2), -1.0);
}

TEST(Integrals, Validation) {
  const SpaceForm c = SpaceForm::chart(3, 0.5);
  EXPECT_THROW(FirstIntegral::make(IntegralId::Esph, c, {}), DomainError);
  EXPECT_THROW(FirstIntegral::make(IntegralId::EhypChart, c, {}), DomainError);
  EXPECT_THROW(FirstIntegral::make(IntegralId::L, c, {}, 2, 4), DomainError);
  EXPECT_THROW(FirstIntegral::make(IntegralId::L, c, {}, 2, 2), DomainError);
  EXPECT_THROW(FirstIntegral::make(IntegralId::C, c, {}, 2), DomainError);
  EXPECT_THROW(FirstIntegral::make(IntegralId::LHat, c, {}, 2, 3), DomainError);
  EXPECT_THROW(FirstIntegral::make(IntegralId::EspHat, c, {}), DomainError);
  const PhaseState s{chart_point({0.1, 0.2, 0.3}), Vec::Zero(4), 0};
  EXPECT_THROW(casimir_C(s, 4), DomainError);
  EXPECT_THROW(angular_momentum(s, 0, 1), DomainError);
  EXPECT_EQ(FirstIntegral::make(IntegralId::C, SpaceForm::chart(5, 0.1), {}, 4).name(), "C_4");
}

TEST(Integrals, KineticForms) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2, 2);
  double worst = 0;
  for (int k = 0; k < 10000; ++k) {
    const int n = 3 + k % 3;
    Vec x(n), xd(n);
    for (int i = 0; i < n; ++i) {
      x[i] = u(rng);
      xd[i] = u(rng);
    }
    const double a = kinetic_sph_chart_quadratic(x, xd), b = kinetic_sph_chart_angular(x, xd);
    worst = std::max(worst, std::abs(a - b) / (1 + std::abs(b)));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Integrals, AngularMomentumFacts) {
  std::mt19937_64 rng(2);
  const SpaceForm c3 = SpaceForm::chart(3, 0.4), c5 = SpaceForm::chart(5, 0.4);
  for (int k = 0; k < 50; ++k) {
    const PhaseState s = random_chart_state(c3, rng);
    EXPECT_NEAR(casimir_C(s, 3), std::pow(angular_momentum(s, 2, 3), 2), 1e-14);
    PhaseState p = random_chart_state(c5, rng);
    p.v.segment(1, 4) = 0.7 * p.q.segment(1, 4);
    for (int i = 2; i <= 5; ++i)
      for (int j = i + 1; j <= 5; ++j) EXPECT_NEAR(angular_momentum(p, i, j), 0.0, 1e-15);
    const PhaseState r = random_chart_state(c5, rng);
    double direct = 0;
    for (int i = 2; i < 5; ++i) direct += std::pow(r.q[i - 1] * r.v[4] - r.v[i - 1] * r.q[4], 2);
    EXPECT_NEAR(casimir_C(r, 5) - casimir_C(r, 4), direct, 1e-12);
    EXPECT_GE(casimir_C(r, 5), casimir_C(r, 4));
    EXPECT_GE(casimir_C(r, 4), casimir_C(r, 3));
    for (int i = 1; i <= 5; ++i)
      for (int j = 1; j <= 5; ++j) EXPECT_EQ(angular_momentum(r, i, j), -angular_momentum(r, j, i));
  }
}

TEST(Integrals, ProjectionIdentities) {
  std::mt19937_64 rng(41);
  for (int n : {3, 4, 5}) {
    for (Branch b : {Branch::Spherical, Branch::Hyperbolic}) {
      const SpaceForm c = SpaceForm::chart(n, 0.5, b);
      const SpaceForm s = c.curved_form();
      const IntegralId tilde = b == Branch::Spherical ? IntegralId::EsphChart : IntegralId::EhypChart;
      const IntegralId own = b == Branch::Spherical ? IntegralId::Esph : IntegralId::Ehyp;
      for (int k = 0; k < 200; ++k) {
        const PhaseState x = random_chart_state(c, rng);
        const PhaseState q = push_state(c, x);
        const double esp = eval(FirstIntegral::make(IntegralId::Esp, c, kParams), x);
        const double esp_hat = eval(FirstIntegral::make(IntegralId::EspHat, s, kParams), q);
        EXPECT_NEAR(esp, esp_hat, 1e-10 * (1 + std::abs(esp)));
        const double et = eval(FirstIntegral::make(tilde, c, kParams), x);
        const double e = eval(FirstIntegral::make(own, s, kParams), q);
        EXPECT_NEAR(et, e, 1e-10 * (1 + std::abs(e)));
        // E_sp is E_sp evaluated at the pulled state
        EXPECT_NEAR(esp_hat, eval(FirstIntegral::make(IntegralId::Esp, c, kParams), pull_state(s, q)), 1e-10 * (1 + std::abs(esp)));
        for (int i = 2; i <= n; ++i)
          for (int j = i + 1; j <= n; ++j) EXPECT_NEAR(angular_momentum(x, i, j), angular_momentum(q, i, j), 1e-12);
      }
    }
  }
}

TEST(Integrals, RotationInvarianceOfChartSphericalEnergy) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  for (int n : {3, 5}) {
    const SpaceForm c = SpaceForm::chart(n, 0.7);
    const FirstIntegral E = FirstIntegral::make(IntegralId::EsphChart, c, kParams);
    for (int k = 0; k < 50; ++k) {
      Eigen::MatrixXd M(n - 1, n - 1);
      for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < n - 1; ++j) M(i, j) = g(rng);
      Eigen::MatrixXd R = Eigen::MatrixXd::Identity(n + 1, n + 1);
      R.block(1, 1, n - 1, n - 1) = Eigen::HouseholderQR<Eigen::MatrixXd>(M).householderQ();
      const PhaseState s = random_chart_state(c, rng);
      const PhaseState r{R * s.q, R * s.v, 0};
      EXPECT_NEAR(E(r), E(s), 1e-12 * (1 + std::abs(E(s))));
    }
  }
}

TEST(Integrals, CanonicalRoundTrip) {
  std::mt19937_64 rng(8);
  for (const SpaceForm& s : all_geometries(4, 0.6)) {
    for (int k = 0; k < 50; ++k) {
      const PhaseState x = random_state(s, rng);
      const PhaseState y = from_canonical(s, to_canonical(s, x));
      EXPECT_LT((x.q - y.q).norm(), 1e-13);
      EXPECT_LT((x.v - y.v).norm(), 1e-12 * (1 + x.v.norm()));
    }
  }
  EXPECT_STREQ(canonical_chart_name(SpaceForm::sphere(3, 0)), "gnomonic");
  EXPECT_STREQ(canonical_chart_name(SpaceForm::hyperboloid(3, 0)), "klein");
}

TEST(Integrals, CanonicalMomentumIsMetricDual) {
  // p . u = g(v, v) for the velocity u = dx/dtau
  std::mt19937_64 rng(9);
  for (const SpaceForm& s : all_geometries(3, 0.4)) {
    const PhaseState x = random_state(s, rng);
    const Eigen::VectorXd z = to_canonical(s, x);
    Eigen::VectorXd u;
    if (s.curved()) {
      const double N2 = time_rescale_factor(s.branch, lift_point(x.q));
      u = N2 * pull_velocity(x.q, x.v).head(3);
    } else {
      u = x.v.head(3);
    }
    EXPECT_NEAR(z.tail(3).dot(u), inner(s, x.v, x.v), 1e-12);
  }
}

TEST(Integrals, BracketBasics) {
  std::mt19937_64 rng(10);
  const SpaceForm c = SpaceForm::chart(3, 0.5);
  const FirstIntegral E = FirstIntegral::make(IntegralId::Esp, c, kParams);
  const FirstIntegral L = FirstIntegral::make(IntegralId::L, c, kParams, 2, 3);
  for (int k = 0; k < 50; ++k) {
    const PhaseState s = random_chart_state(c, rng);
    EXPECT_EQ(poisson_bracket(E, E, s), 0.0);
    EXPECT_LT(std::abs(poisson_bracket(E, L, s)), 1e-6);
  }
  // {q1, p1} = 1 with p1 = v1 / (1 + a^2)
  const PhaseState s = random_chart_state(c, rng);
  const PhaseFunction q1 = [](const PhaseState& x) { return x.q[0]; };
  const PhaseFunction p1 = [&](const PhaseState& x) { return x.v[0] * c.axis_weight(); };
  EXPECT_NEAR(poisson_bracket(c, q1, p1, s), 1.0, 1e-9);
}

TEST(Integrals, AngularMomentumBracketIdentity) {
  std::mt19937_64 rng(5);
  const int n = 5;
  const SpaceForm c = SpaceForm::chart(n, 0.0);
  double worst = 0;
  for (int k = 0; k < 10; ++k) {
    const PhaseState s = random_chart_state(c, rng);
    for (int k1 = 1; k1 <= n; ++k1)
      for (int k2 = 1; k2 <= n; ++k2)
        for (int l1 = 1; l1 <= n; ++l1)
          for (int l2 = 1; l2 <= n; ++l2) {
            if (k1 == k2 || l1 == l2) continue;
            const PhaseFunction F = [=](const PhaseState& x) { return angular_momentum(x, k1, k2); };
            const PhaseFunction G = [=](const PhaseState& x) { return angular_momentum(x, l1, l2); };
            const double rhs = kronecker(k1, l1) * angular_momentum(s, k2, l2) +
                               kronecker(k2, l2) * angular_momentum(s, k1, l1) -
                               kronecker(k1, l2) * angular_momentum(s, k2, l1) -
                               kronecker(k2, l1) * angular_momentum(s, k1, l2);
            worst = std::max(worst, std::abs(poisson_bracket(c, F, G, s) - rhs));
          }
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Integrals, InvolutionAndRankAllGeometries) {
  std::mt19937_64 rng(77);
  for (int n : {3, 4, 5}) {
    for (const SpaceForm& s : all_geometries(n, 0.5)) {
      const auto fam = integral_family(s, kParams);
      ASSERT_EQ(static_cast<int>(fam.size()), n);
      for (int k = 0; k < 10; ++k) {
        const PhaseState x = random_state(s, rng);
        for (std::size_t i = 0; i < fam.size(); ++i)
          for (std::size_t j = i + 1; j < fam.size(); ++j)
            EXPECT_LT(std::abs(poisson_bracket(fam[i], fam[j], x)), 1e-6)
                << to_string(s.kind) << " n=" << n << " " << fam[i].name() << "," << fam[j].name();
        EXPECT_EQ(jacobian_rank(fam, x), n) << to_string(s.kind) << " n=" << n;
        auto dup = fam;
        dup.push_back(fam.front());
        EXPECT_EQ(jacobian_rank(dup, x), n);
      }
    }
  }
}

TEST(Integrals, ConservedAlongWallFreeFlow) {
  std::mt19937_64 rng(55);
  SampleBox box;
  box.radius = 0.6;
  box.speed = 0.5;
  for (int n : {3, 4, 5}) {
    for (const SpaceForm& s : all_geometries(n, 0.5)) {
      const PhaseState x = random_state(s, rng, box);
      const double T = 2.0;
      const Trajectory tr = simulate(s, kParams, {}, x, {T});
      if (tr.status != Termination::TimeLimit) continue;  // orbit left the chart domain
      for (const DriftRow& r : drift_report(tr, integral_family(s, kParams)))
        EXPECT_LT(r.max_drift / T, 1e-9) << to_string(s.kind) << " n=" << n << " " << r.name;
    }
  }
}

TEST(Integrals, ReflectionJumpsVanish) {
  const SpaceForm c = SpaceForm::chart(3, 0.5);
  const QuadricWall w = QuadricWall::from_focus(c, WallKind::Spheroid, 0.9, "w");
  const PhaseState s0{chart_point({0.2, 0.3, 0.1}), Vec(Eigen::Vector4d(1.2, -0.9, 1.6, 0)), 0.0};
  const Trajectory tr = simulate(c, kParams, {w}, s0, {1e6, 30});
  ASSERT_EQ(tr.events.size(), 30u);
  const auto rows = drift_report(tr, {FirstIntegral::make(IntegralId::L, c, kParams, 2, 3)});
  EXPECT_LT(rows[0].max_jump, 1e-12);
  EXPECT_EQ(rows[0].drift_at_events.size(), 30u);
}
