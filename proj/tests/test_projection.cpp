#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lagbill/projection.hpp"
#include "oracles.hpp"

using namespace lagbill;
using oracle::chart_point;

TEST(Projection, ProjectPointExamples) {
  const Vec z = chart_point({0, 0, 0});
  EXPECT_TRUE(project_point(Branch::Spherical, z).isApprox(z));
  EXPECT_TRUE(project_point(Branch::Hyperbolic, z).isApprox(z));
  const double r = 1.0 / std::sqrt(2.0);
  Vec e(4);
  e << r, 0, 0, -r;
  EXPECT_LT((project_point(Branch::Spherical, chart_point({1, 0, 0})) - e).norm(), 1e-15);
  Vec h(4);
  h << 0.75, 0, 0, -1.25;
  const Vec ph = project_point(Branch::Hyperbolic, chart_point({0.6, 0, 0}));
  EXPECT_LT((ph - h).norm(), 1e-15);
  EXPECT_TRUE(on_surface(SpaceForm::hyperboloid(3, 0), ph));
  EXPECT_THROW(project_point(Branch::Hyperbolic, chart_point({1.2, 0, 0})), DomainError);
  Vec off(4);
  off << 0, 0, 0, -2;
  EXPECT_THROW(project_point(Branch::Spherical, off), DomainError);
}

TEST(Projection, LiftPointExamples) {
  const double r = 1.0 / std::sqrt(2.0);
  Vec q(4);
  q << r, 0, 0, -r;
  EXPECT_LT((lift_point(q) - chart_point({1, 0, 0})).norm(), 1e-15);
  EXPECT_TRUE(lift_point(chart_point({0, 0, 0})).isApprox(chart_point({0, 0, 0})));
  Vec eq(4);
  eq << 1, 0, 0, 0;
  EXPECT_THROW(lift_point(eq), SingularityError);
  eq << 1, 0, 0, -1e-13;
  EXPECT_THROW(lift_point(eq), SingularityError);
}

TEST(Projection, RoundTrips) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    Vec q(5);
    for (int i = 0; i < 5; ++i) q[i] = g(rng);
    q[4] = -std::abs(q[4]) - 0.05;
    q /= q.norm();
    worst = std::max(worst, (project_point(Branch::Spherical, lift_point(q)) - q).norm());
    const Vec x = lift_point(q);
    worst = std::max(worst, (lift_point(project_point(Branch::Spherical, x)) - x).norm() / (1 + x.norm()));
  }
  EXPECT_LT(worst, 1e-12);
  worst = 0.0;
  std::uniform_real_distribution<double> u(-0.49, 0.49);
  for (int k = 0; k < 10000; ++k) {
    Vec x(5);
    for (int i = 0; i < 4; ++i) x[i] = u(rng);
    x[4] = -1.0;
    const Vec q = project_point(Branch::Hyperbolic, x);
    worst = std::max(worst, (lift_point(q) - x).norm());
    worst = std::max(worst, (project_point(Branch::Hyperbolic, lift_point(q)) - q).norm());
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Projection, PushVelocityExamples) {
  const Vec z = chart_point({0, 0, 0});
  Vec e1(4);
  e1 << 1, 0, 0, 0;
  EXPECT_TRUE(push_velocity(Branch::Spherical, z, e1).isApprox(e1));
  EXPECT_TRUE(push_velocity(Branch::Hyperbolic, z, e1).isApprox(e1));
  // radial direction lambda q~ is killed
  const Vec x = chart_point({0.3, -0.2, 0.1});
  for (Branch b : {Branch::Spherical, Branch::Hyperbolic}) {
    const Vec out = push_velocity(b, x, 2.5 * x);
    EXPECT_LT(out.norm(), 1e-15);
  }
}

TEST(Projection, PushPullInverseAndTangent) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  double worst = 0.0, tangent = 0.0;
  for (Branch b : {Branch::Spherical, Branch::Hyperbolic}) {
    for (int k = 0; k < 2000; ++k) {
      Vec x(5), v(5);
      for (int i = 0; i < 4; ++i) {
        x[i] = u(rng);
        v[i] = 3 * u(rng);
      }
      x[4] = -1;
      v[4] = 0;
      const Vec q = project_point(b, x);
      const Vec w = push_velocity(b, x, v);
      worst = std::max(worst, (pull_velocity(q, w) - v).norm());
      tangent = std::max(tangent, std::abs(b == Branch::Spherical ? q.dot(w) : oracle::minkowski(q, w)));
    }
  }
  EXPECT_LT(worst, 1e-10);
  EXPECT_LT(tangent, 1e-12);
}

TEST(Projection, TimeRescaleExamples) {
  EXPECT_DOUBLE_EQ(time_rescale_factor(Branch::Spherical, chart_point({0, 0, 0})), 1.0);
  EXPECT_DOUBLE_EQ(time_rescale_factor(Branch::Spherical, chart_point({1, 0, 0})), 2.0);
  EXPECT_NEAR(time_rescale_factor(Branch::Hyperbolic, chart_point({0.6, 0, 0})), 0.64, 1e-15);
}
