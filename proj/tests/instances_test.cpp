#include "pptcanon/instances.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "pptcanon/spectral.hpp"
#include "test_support.hpp"

namespace pptcanon {
namespace {

TEST(HaarUnitary, IsUnitary) {
  for (std::size_t n : {1u, 2u, 3u, 6u, 16u}) {
    const ComplexMatrix u = haar_unitary(n, 1234 + n);
    const auto side = static_cast<Eigen::Index>(n);
    EXPECT_LE((u.adjoint() * u - ComplexMatrix::Identity(side, side)).norm(), 1e-12) << "n=" << n;
  }
  EXPECT_NEAR(std::abs(haar_unitary(1, 5)(0, 0)), 1.0, 1e-15);
  EXPECT_THROW(haar_unitary(0, 1), InvalidArgumentError);
}

TEST(HaarUnitary, FirstMomentMatchesHaarMeasure) {
  // For Haar U(n), |U_00|^2 ~ Beta(1, n-1): mean 1/n, variance (n-1)/(n^2 (n+1)).
  constexpr int kSamples = 2000;
  for (std::size_t n : {2u, 4u}) {
    Rng rng(600 + n);
    double sum = 0.0;
    for (int s = 0; s < kSamples; ++s) sum += std::norm(haar_unitary(n, rng)(0, 0));
    const double nn = static_cast<double>(n);
    const double mean = sum / kSamples;
    const double sigma = std::sqrt((nn - 1.0) / (nn * nn * (nn + 1.0)) / kSamples);
    EXPECT_NEAR(mean, 1.0 / nn, 3.0 * sigma) << "n=" << n;
  }
}

TEST(HaarUnitary, DeterministicPerSeed) {
  EXPECT_EQ(haar_unitary(3, 42), haar_unitary(3, 42));
  EXPECT_NE(haar_unitary(3, 42), haar_unitary(3, 43));
}

TEST(RandomInvertible, SingularValuesInRange) {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix m = random_invertible(3, rng);
    const auto sv = hermitian_eig(hermitian_part(m.adjoint() * m)).eigenvalues;
    EXPECT_GE(std::sqrt(sv(0)), 0.8 - 1e-12);
    EXPECT_LE(std::sqrt(sv(2)), 1.25 + 1e-12);
  }
}

TEST(RandomCommutingFamily, CommutesAndMatchesEigenvalues) {
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto family = random_commuting_family(n, 900 + n);
    const CanonicalForm cf{n, family.a, family.b, family.c, ComplexMatrix::Identity(n, n)};
    EXPECT_LE(check_commutation(cf, 1e-12).worst().relative, 1e-12);
    const ComplexMatrix rebuilt = family.basis * family.a_eigenvalues.asDiagonal() * family.basis.adjoint();
    EXPECT_LE((rebuilt - family.a).norm(), 1e-13);
    for (Eigen::Index k = 0; k < family.a_eigenvalues.size(); ++k) EXPECT_LE(std::abs(family.a_eigenvalues(k)), 1.0);
  }
}

TEST(RandomCommutingFamily, ZeroScaleGivesZeros) {
  const auto family = random_commuting_family(3, 1, 0.0);
  EXPECT_EQ(family.a, ComplexMatrix::Zero(3, 3));
  EXPECT_EQ(family.b, ComplexMatrix::Zero(3, 3));
  EXPECT_EQ(family.c, ComplexMatrix::Zero(3, 3));
  EXPECT_THROW(random_commuting_family(3, 1, -1.0), InvalidArgumentError);
}

TEST(RandomInstance, IdentityModeIsCanonical) {
  const auto bundle = random_instance(3, 10);
  ASSERT_TRUE(bundle.ground_truth.has_value());
  EXPECT_EQ(bundle.label, InstanceLabel::kCanonical);
  EXPECT_EQ(bundle.ground_truth->cf.d, ComplexMatrix::Identity(3, 3));
  EXPECT_EQ(bundle.rho, build_canonical_222n(bundle.ground_truth->cf));
  EXPECT_EQ(bundle.shape, shape_222n(3));
}

TEST(RandomInstance, ZeroScaleOneDimensionIsProjector) {
  InstanceOptions options;
  options.scale = 0.0;
  const auto bundle = random_instance(1, 3, options);
  EXPECT_EQ(bundle.rho, testing::projector(testing::ket3(1, 1, 1)));
}

TEST(RandomInstance, DisguiseIsLocalConjugationOfTheGroundTruth) {
  InstanceOptions options;
  options.disguise = true;
  options.d_mode = DMode::kRandomPd;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto bundle = random_instance(n, 20 + n, options);
    EXPECT_EQ(bundle.label, InstanceLabel::kDisguised);
    const auto& truth = *bundle.ground_truth;
    const ComplexMatrix expected = local_transform(build_canonical_222n(truth.cf), bundle.shape,
                                                   {truth.disguise_ops.begin(), truth.disguise_ops.end()});
    EXPECT_LE(max_entry_error(bundle.rho, expected), 1e-10);
    EXPECT_EQ(bundle.rho, ComplexMatrix(bundle.rho.adjoint()));
  }
}

TEST(RandomInstance, StreamsAreIndependentOfOptions) {
  InstanceOptions plain;
  InstanceOptions fancy;
  fancy.d_mode = DMode::kRandomPd;
  fancy.disguise = true;
  const auto x = random_instance(4, 99, plain).ground_truth->cf;
  const auto y = random_instance(4, 99, fancy).ground_truth->cf;
  EXPECT_EQ(x.a, y.a);
  EXPECT_EQ(x.b, y.b);
  EXPECT_EQ(x.c, y.c);
  EXPECT_EQ(random_instance(4, 99, fancy).rho, random_instance(4, 99, fancy).rho);
}

TEST(RandomInstance, StatesArePptWithRankN) {
  InstanceOptions options;
  options.d_mode = DMode::kRandomPd;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto bundle = random_instance(n, 40 + n, options);
    EXPECT_TRUE(is_ppt(bundle.rho, bundle.shape, 1e-10).ppt);
    EXPECT_EQ(hermitian_rank(bundle.rho), n);
    const auto d = bundle.ground_truth->cf.d;
    const auto eig = hermitian_eig(d).eigenvalues;
    EXPECT_GE(eig(0), 0.5 - 1e-12);
    EXPECT_LE(eig(eig.size() - 1), 2.0 + 1e-12);
  }
}

TEST(GhzWerner, Endpoints) {
  const ComplexMatrix mixed = ghz_werner(0.0);
  EXPECT_EQ(mixed, ComplexMatrix::Identity(8, 8) / 8.0);
  EXPECT_TRUE(is_ppt(mixed, SystemShape{2, 2, 2}).ppt);

  const ComplexMatrix pure = ghz_werner(1.0);
  const auto pt = hermitian_eig(partial_transpose(pure, SystemShape{2, 2, 2}, {0})).eigenvalues;
  EXPECT_NEAR(pt(0), -0.5, 1e-15);

  for (double p : {0.1, 0.3, 0.9}) {
    const ComplexMatrix rho = ghz_werner(p);
    EXPECT_NEAR(rho.trace().real(), 1.0, 4 * std::numeric_limits<double>::epsilon());
    EXPECT_EQ(rho, ComplexMatrix(rho.adjoint()));
  }
  EXPECT_THROW(ghz_werner(1.5), InvalidArgumentError);
  EXPECT_THROW(ghz_werner(-0.1), InvalidArgumentError);
}

TEST(GhzWerner, ControlTensorsAFixedLastFactor) {
  const auto bundle = ghz_werner_control(0.9, 3);
  EXPECT_EQ(bundle.label, InstanceLabel::kEntangledControl);
  EXPECT_EQ(bundle.shape, shape_222n(3));
  EXPECT_FALSE(is_ppt(bundle.rho, bundle.shape).ppt);
  EXPECT_NEAR(bundle.rho.trace().real(), 1.0, 1e-15);
}

TEST(RandomProductState, IsPptWithUnitTrace) {
  const auto bundle = random_product_state(shape_222n(2), 8);
  EXPECT_EQ(bundle.label, InstanceLabel::kProductControl);
  EXPECT_TRUE(is_ppt(bundle.rho, bundle.shape).ppt);
  EXPECT_EQ(hermitian_rank(bundle.rho), 16u);
  EXPECT_NEAR(bundle.rho.trace().real(), 1.0, 1e-14);
}

}  // namespace
}  // namespace pptcanon
