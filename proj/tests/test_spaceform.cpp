#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lagbill/spaceform.hpp"
#include "oracles.hpp"

using namespace lagbill;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Vec random_vec(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g;
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = g(rng);
  return v;
}

}  // namespace

TEST(SpaceForm, Validation) {
  EXPECT_THROW(SpaceForm::chart(1, 0.0), DimensionError);
  EXPECT_THROW(SpaceForm::hyperboloid(3, 1.0), DomainError);
  EXPECT_THROW(SpaceForm::chart(3, 1.5, Branch::Hyperbolic), DomainError);
  EXPECT_THROW(SpaceForm::sphere(3, std::nan("")), DomainError);
  EXPECT_NO_THROW(SpaceForm::sphere(5, 3.0));
}

TEST(SpaceForm, InnerExamples) {
  EXPECT_DOUBLE_EQ(inner(SpaceForm::chart(2, 0.0), vec({1, 0, 0}), vec({1, 0, 0})), 1.0);
  EXPECT_DOUBLE_EQ(inner(SpaceForm::chart(2, 1.0), vec({1, 0, 0}), vec({1, 0, 0})), 0.5);
  EXPECT_DOUBLE_EQ(inner(SpaceForm::hyperboloid(3, 0.0), vec({0, 0, 0, -1}), vec({0, 0, 0, -1})), -1.0);
  // hyperbolic-branch chart divides by 1 - a^2
  EXPECT_DOUBLE_EQ(inner(SpaceForm::chart(3, 0.5, Branch::Hyperbolic), vec({1, 0, 0, 0}), vec({1, 0, 0, 0})),
                   1.0 / 0.75);
  EXPECT_THROW(inner(SpaceForm::chart(3, 0.0), vec({1, 0}), vec({1, 0})), DimensionError);
}

TEST(SpaceForm, NormExamples) {
  EXPECT_NEAR(norm(SpaceForm::chart(3, 1.0), vec({1, 0, 0, 0})), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(norm(SpaceForm::sphere(3, 0.0), vec({0, 1, 0, 0})), 1.0);
  const SpaceForm H = SpaceForm::hyperboloid(3, 0.0);
  const Vec p = vec({0.75, 0, 0, -1.25});
  EXPECT_NEAR(norm(H, p), 1.0, 1e-15);
  EXPECT_TRUE(on_surface(H, p));
  EXPECT_THROW(norm(H, vec({1, 0, 0, 1})), DomainError);
}

TEST(SpaceForm, InnerSymmetricBilinear) {
  std::mt19937_64 rng(7);
  for (const SpaceForm& s : {SpaceForm::chart(4, 0.7), SpaceForm::chart(4, 0.3, Branch::Hyperbolic),
                             SpaceForm::sphere(4, 0.2), SpaceForm::hyperboloid(4, 0.2)}) {
    for (int k = 0; k < 50; ++k) {
      const Vec u = random_vec(rng, 5), v = random_vec(rng, 5), w = random_vec(rng, 5);
      const double al = 0.37, be = -1.9;
      EXPECT_NEAR(inner(s, u, v), inner(s, v, u), 1e-13);
      EXPECT_NEAR(inner(s, al * u + be * w, v), al * inner(s, u, v) + be * inner(s, w, v), 1e-12);
    }
  }
}

TEST(SpaceForm, ChartAtZeroIsDot) {
  std::mt19937_64 rng(3);
  const SpaceForm c = SpaceForm::chart(3, 0.0);
  for (int k = 0; k < 20; ++k) {
    Vec u = random_vec(rng, 4), v = random_vec(rng, 4);
    EXPECT_NEAR(inner(c, u, v), u.head(3).dot(v.head(3)), 1e-14);
  }
}

TEST(SpaceForm, TangentProjectExamples) {
  const Vec q = vec({0, 0, 0, -1});
  EXPECT_TRUE(tangent_project(SpaceForm::sphere(3, 0), q, vec({1, 0, 0, 5})).isApprox(vec({1, 0, 0, 0})));
  EXPECT_TRUE(tangent_project(SpaceForm::hyperboloid(3, 0), q, vec({0, 1, 0, 3})).isApprox(vec({0, 1, 0, 0})));
  EXPECT_TRUE(tangent_project(SpaceForm::chart(3, 0.4), vec({2, 1, 0, -1}), vec({1, 2, 3, 4}))
                  .isApprox(vec({1, 2, 3, 0})));
  EXPECT_THROW(tangent_project(SpaceForm::sphere(3, 0), vec({0, 0, 0, -2}), vec({1, 0, 0, 0})), DomainError);
}

TEST(SpaceForm, TangentProjectIdempotentAndOrthogonal) {
  std::mt19937_64 rng(11);
  const SpaceForm S = SpaceForm::sphere(4, 0.1), H = SpaceForm::hyperboloid(4, 0.1);
  for (int k = 0; k < 100; ++k) {
    Vec qs = random_vec(rng, 5);
    qs /= qs.norm();
    const Vec w = random_vec(rng, 5);
    const Vec t1 = tangent_project(S, qs, w);
    EXPECT_NEAR(t1.dot(qs), 0.0, 1e-12);
    EXPECT_LT((tangent_project(S, qs, t1) - t1).norm(), 1e-12);

    Vec x = random_vec(rng, 4) * 0.8;
    Vec qh(5);
    qh.head(4) = x;
    qh[4] = -std::sqrt(1.0 + x.squaredNorm());
    const Vec t2 = tangent_project(H, qh, w);
    EXPECT_NEAR(oracle::minkowski(t2, qh), 0.0, 1e-12);
    EXPECT_LT((tangent_project(H, qh, t2) - t2).norm(), 1e-12);
  }
}

TEST(SpaceForm, CenterAngleExamples) {
  const SpaceForm S = SpaceForm::sphere(3, 0), H = SpaceForm::hyperboloid(3, 0);
  const Vec z = vec({0, 0, 0, -1});
  EXPECT_NEAR(center_angle(S, z, z), 0.0, 1e-15);
  EXPECT_NEAR(center_angle(S, vec({1, 0, 0, 0}), z), std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(center_angle(H, vec({0.75, 0, 0, -1.25}), z), std::acosh(1.25), 1e-14);
  EXPECT_NEAR(std::acosh(1.25), 0.69315, 1e-5);
  EXPECT_THROW(center_angle(S, vec({0, 0, 0, -2}), z), DomainError);
}

TEST(SpaceForm, CenterAngleSymmetric) {
  std::mt19937_64 rng(5);
  const SpaceForm S = SpaceForm::sphere(3, 0), H = SpaceForm::hyperboloid(3, 0);
  for (int k = 0; k < 50; ++k) {
    Vec p = random_vec(rng, 4), q = random_vec(rng, 4);
    p /= p.norm();
    q /= q.norm();
    EXPECT_NEAR(center_angle(S, p, q), center_angle(S, q, p), 1e-14);
    EXPECT_NEAR(center_angle(S, p, p), 0.0, 1e-7);
    Vec a = random_vec(rng, 4), b = random_vec(rng, 4);
    a[3] = -std::sqrt(1 + a.head(3).squaredNorm());
    b[3] = -std::sqrt(1 + b.head(3).squaredNorm());
    EXPECT_NEAR(center_angle(H, a, b), center_angle(H, b, a), 1e-12);
  }
}

TEST(SpaceForm, RenormalizeRestoresConstraints) {
  const SpaceForm S = SpaceForm::sphere(3, 0.2), H = SpaceForm::hyperboloid(3, 0.2);
  Vec q = vec({0.1, 0.2, 0.3, -0.95}) * 1.001, v = vec({0.3, -0.1, 0.2, 0.05});
  renormalize(S, q, v);
  EXPECT_NEAR(surface_residual(S, q), 0.0, 1e-15);
  EXPECT_NEAR(q.dot(v), 0.0, 1e-15);
  Vec qh = vec({0.3, 0.1, 0.0, -1.1}), vh = vec({0.3, -0.1, 0.2, 0.05});
  renormalize(H, qh, vh);
  EXPECT_NEAR(surface_residual(H, qh), 0.0, 1e-14);
  EXPECT_NEAR(oracle::minkowski(qh, vh), 0.0, 1e-14);
}
