#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "suslov/cayley.hpp"
#include "suslov/errors.hpp"

namespace suslov {
namespace {

Vec3 random_ball(std::mt19937_64& rng, double radius) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec3 d(n(rng), n(rng), n(rng));
  return d.normalized() * radius * std::cbrt(u(rng));
}

TEST(Cay, OriginIsIdentity) {
  EXPECT_EQ(cay(Vec3::Zero()).matrix(), Mat3::Identity());
}

TEST(Cay, RetractionAxiom) {
  const Vec3 w(0.4, 0.5, 0);
  const Mat3 prod = cay(w).matrix() * cay(-w).matrix();
  EXPECT_LE(entrywise_norm(prod - Mat3::Identity()), 1e-13);
}

TEST(Cay, QuarterTurnAboutE1) {
  Mat3 expected;
  expected << 1, 0, 0,
              0, 0, -1,
              0, 1, 0;
  EXPECT_LE(entrywise_norm(cay(Vec3(2, 0, 0)).matrix() - expected), 1e-15);
}

TEST(Cay, RandomOrthonormalAndRetraction) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10000; ++i) {
    const Vec3 w = random_ball(rng, 10.0);
    const Mat3 r = cay(w).matrix();
    EXPECT_LE(orthonormality_defect(r), 1e-13);
    EXPECT_NEAR(r.determinant(), 1.0, 1e-13);
    EXPECT_LE(entrywise_norm(r * cay(-w).matrix() - Mat3::Identity()), 1e-13);
  }
}

TEST(Cay, SecondOrderExpansion) {
  const Vec3 w(0.4, 0.5, 0.3);
  const Mat3 h = hat(w).matrix();
  std::vector<double> xs, ys;
  for (double le = -4.0; le <= -1.0; le += 0.5) {
    const double eps = std::pow(10.0, le);
    const Mat3 taylor = Mat3::Identity() + eps * h + 0.5 * eps * eps * h * h;
    const double err = entrywise_norm(cay(eps * w).matrix() - taylor);
    if (err < 1e-14) continue;
    xs.push_back(std::log(eps));
    ys.push_back(std::log(err));
  }
  ASSERT_GE(xs.size(), 4u);
  const double slope = (ys.back() - ys.front()) / (xs.back() - xs.front());
  EXPECT_NEAR(slope, 3.0, 0.1);
}

TEST(CayInv, Examples) {
  EXPECT_LE(cay_inv(Rot3::identity()).norm(), 1e-15);
  const Vec3 w(0.4, 0.5, 0);
  EXPECT_LE((cay_inv(cay(w)) - w).norm(), 1e-12);
  Mat3 half_turn;
  half_turn << -1, 0, 0,
               0, -1, 0,
               0, 0, 1;
  EXPECT_THROW(cay_inv(Rot3(half_turn)), DomainError);
}

TEST(CayInv, RandomRoundTrips) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 w = random_ball(rng, 5.0);
    EXPECT_LE((cay_inv(cay(w)) - w).norm(), 1e-12 * (1.0 + w.squaredNorm()));
  }
}

TEST(Dcay, Examples) {
  EXPECT_EQ(dcay(Vec3::Zero()), Mat3::Identity());
  const Vec3 w2(2, 0, 0);
  const Mat3 expected = 0.5 * (Mat3::Identity() + 0.5 * hat(w2).matrix());
  EXPECT_LE(entrywise_norm(dcay(w2) - expected), 1e-15);
  const Vec3 w(0.4, 0.5, 0);
  EXPECT_LE(entrywise_norm(dcay(w) * dcay_inv(w) - Mat3::Identity()), 1e-12);
}

TEST(DcayInv, Examples) {
  EXPECT_EQ(dcay_inv(Vec3::Zero()), Mat3::Identity());
  const Vec3 w(0.4, 0.5, 0);
  EXPECT_LE(entrywise_norm(dcay_inv(w) * dcay(w) - Mat3::Identity()), 1e-12);
  EXPECT_NEAR(dcay_inv(w)(0, 0), 1.04, 1e-15);
}

TEST(Dcay, RandomMutualInverses) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 10000; ++i) {
    const Vec3 w = random_ball(rng, 10.0);
    EXPECT_LE(entrywise_norm(dcay(w) * dcay_inv(w) - Mat3::Identity()), 1e-12);
    EXPECT_LE(entrywise_norm(dcay_inv(w) * dcay(w) - Mat3::Identity()), 1e-12);
  }
}

TEST(DcayInvScaled, Examples) {
  Mat3 at_zero = Mat3::Identity();
  at_zero(2, 2) = 0.0;
  EXPECT_EQ(dcay_inv_scaled(Vec3::Zero(), 0.1), at_zero);
  EXPECT_EQ(dcay_inv_scaled(Vec3(0.4, 0.5, 0), 0.0), at_zero);
  const Mat3 m = dcay_inv_scaled(Vec3(0.4, 0.5, 0), 1.0);
  EXPECT_NEAR(m(0, 2), -0.25, 1e-15);
  EXPECT_NEAR(m(1, 2), 0.2, 1e-15);
}

TEST(DcayInvScaled, RejectsUnconstrained) {
  EXPECT_THROW(dcay_inv_scaled(Vec3(0.4, 0.5, 1e-9), 1.0), ConstraintError);
}

TEST(DcayInvScaled, AgreesWithGenericOutsideCorner) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 w(u(rng), u(rng), 0.0);
    const double eps = std::abs(u(rng)) / 3.0;
    Mat3 diff = dcay_inv_scaled(w, eps) - dcay_inv(eps * w);
    EXPECT_NEAR(std::abs(diff(2, 2)), 1.0, 1e-14);
    diff(2, 2) = 0.0;
    EXPECT_LE(diff.cwiseAbs().maxCoeff(), 1e-14);
  }
}

}  // namespace
}  // namespace suslov
