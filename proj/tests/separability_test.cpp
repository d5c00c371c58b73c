#include "pptcanon/separability.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

namespace pptcanon {
namespace {

using testing::diag;
using testing::ket3;

ComplexVector vec(std::initializer_list<Complex> values) {
  ComplexVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (Complex x : values) v(k++) = x;
  return v;
}

TEST(ReconstructDecomposition, EmptyIsZero) {
  EXPECT_EQ(reconstruct_decomposition({}, 2), ComplexMatrix::Zero(16, 16));
}

TEST(ReconstructDecomposition, SingleTermIsProductProjector) {
  const ProductTerm t{vec({1, 2}), vec({0, Complex(0, 1)}), vec({3, -1}), vec({1, 1, 1})};
  const ComplexMatrix rho = reconstruct_decomposition({{t}}, 3);
  const ComplexVector v = kron(kron(kron(t.psi, t.phi), t.omega), t.g);
  EXPECT_LE((rho - v * v.adjoint()).norm(), 1e-14);
  EXPECT_NEAR(rho.trace().real(), 5.0 * 1.0 * 10.0 * 3.0, 1e-12);
  EXPECT_EQ(hermitian_rank(rho), 1u);
  EXPECT_THROW(reconstruct_decomposition({{t}}, 2), DimensionError);
}

TEST(NormalizedTerms, WeightsAreProductsOfSquaredNorms) {
  const ProductTerm t{vec({1, 2}), vec({0, 2}), vec({3, -1}), vec({1, 1})};
  const ProductTerm zero{vec({0, 0}), vec({1, 0}), vec({1, 0}), vec({1, 0})};
  const auto weighted = normalized_terms({{t, zero}});
  ASSERT_EQ(weighted.size(), 1u);
  EXPECT_NEAR(weighted[0].weight, 5.0 * 4.0 * 10.0 * 2.0, 1e-12);
  EXPECT_NEAR(weighted[0].unit.psi.norm(), 1.0, 1e-15);
  EXPECT_NEAR(weighted[0].unit.g.norm(), 1.0, 1e-15);
}

TEST(DecomposeCanonical, ZeroFamilyOneDimension) {
  const CanonicalForm cf{1, diag({0}), diag({0}), diag({0}), diag({1})};
  const auto pd = decompose_canonical(cf);
  ASSERT_EQ(pd.terms.size(), 1u);
  EXPECT_EQ(pd.terms[0].psi, vec({0, 1}));
  EXPECT_EQ(pd.terms[0].phi, vec({0, 1}));
  EXPECT_EQ(pd.terms[0].omega, vec({0, 1}));
  EXPECT_EQ(pd.terms[0].g, vec({1}));
}

TEST(DecomposeCanonical, DiagonalExampleTerms) {
  const auto pd = decompose_canonical(testing::diagonal_form());
  ASSERT_EQ(pd.terms.size(), 2u);
  // The eigenvector order is not fixed; pair the terms by their A eigenvalue.
  for (const auto& t : pd.terms) {
    const bool first = std::abs(t.omega(0) - 2.0) < 1e-14;
    if (first) {
      EXPECT_LE((t.psi - vec({0, 1})).norm(), 1e-14);
      EXPECT_LE((t.phi - vec({5, 1})).norm(), 1e-14);
      EXPECT_LE((t.omega - vec({2, 1})).norm(), 1e-14);
      EXPECT_LE((t.g - vec({1, 0})).norm(), 1e-14);
    } else {
      EXPECT_LE((t.psi - vec({1, 1})).norm(), 1e-14);
      EXPECT_LE((t.phi - vec({7, 1})).norm(), 1e-14);
      EXPECT_LE((t.omega - vec({3, 1})).norm(), 1e-14);
      EXPECT_LE((t.g - vec({0, 1})).norm(), 1e-14);
    }
  }
  EXPECT_NE(std::abs(pd.terms[0].omega(0) - pd.terms[1].omega(0)), 0.0);
}

TEST(DecomposeCanonical, ComplexEigenvaluesAreConjugated) {
  const CanonicalForm cf{1, diag({Complex(0, 1)}), diag({0}), diag({0}), diag({1})};
  const auto pd = decompose_canonical(cf);
  ASSERT_EQ(pd.terms.size(), 1u);
  EXPECT_LE((pd.terms[0].omega - vec({Complex(0, -1), 1})).norm(), 1e-15);
  EXPECT_LE((reconstruct_decomposition(pd, 1) - build_canonical_222n(cf)).norm(), 1e-14);
}

TEST(DecomposeCanonical, ReproducesCanonicalStateAcrossDimensions) {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      for (DMode mode : {DMode::kIdentity, DMode::kRandomPd}) {
        const auto cf = testing::random_form(n, 300 * n + seed, mode);
        const ComplexMatrix rho = build_canonical_222n(cf);
        const auto pd = decompose_canonical(cf, kDefaultTol, seed);
        EXPECT_EQ(pd.terms.size(), n);
        EXPECT_LE(max_entry_error(reconstruct_decomposition(pd, n), rho), 1e-9);
        for (const auto& t : pd.terms) {
          EXPECT_EQ(t.psi(1), Complex(1.0));
          EXPECT_EQ(t.phi(1), Complex(1.0));
          EXPECT_EQ(t.omega(1), Complex(1.0));
        }
      }
    }
  }
}

TEST(DecomposeCanonical, Errors) {
  auto cf = testing::diagonal_form();
  cf.d = diag({1, 0});
  EXPECT_THROW(decompose_canonical(cf), SingularError);
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  EXPECT_THROW(decompose_canonical({2, testing::pauli_x(), testing::pauli_z(), i2, i2}), InvalidCanonicalFormError);
}

TEST(FindProductBasis, CanonicalStateUsesIdentityFrame) {
  const ComplexMatrix rho = build_canonical_222n(testing::diagonal_form());
  const auto frame = find_product_basis(rho, 2);
  ASSERT_TRUE(frame.has_value());
  EXPECT_EQ(frame->trial, 0);
  for (const auto& op : frame->ops) EXPECT_EQ(op, ComplexMatrix::Identity(2, 2));
}

TEST(FindProductBasis, FlippedStateNeedsARandomFrame) {
  // |011> x D has nothing on |111>, but a generic product frame sees it.
  const ComplexMatrix rho = kron(testing::projector(ket3(0, 1, 1)), diag({1, 2}));
  const auto frame = find_product_basis(rho, 2);
  ASSERT_TRUE(frame.has_value());
  EXPECT_GE(frame->trial, 1);
  const auto again = find_product_basis(rho, 2);
  EXPECT_EQ(again->trial, frame->trial);
  EXPECT_EQ(again->ops[0], frame->ops[0]);
}

TEST(FindProductBasis, ReportsNotFound) {
  // Rank 2, but every product projection of the first three qubits leaves a
  // rank-1 operator on the last factor.
  const ComplexMatrix rho =
      kron(testing::projector(ket3(0, 0, 0)) + testing::projector(ket3(0, 0, 1)), diag({1, 0}));
  EXPECT_FALSE(find_product_basis(rho, 2, kDefaultTol, 5).has_value());
  EXPECT_THROW(find_product_basis(diag({1, 1, 1, 1, 1, 1, 1, -1}), 1), NotPsdError);
}

void expect_certificate_reproduces(const ComplexMatrix& rho, std::size_t n, double bound) {
  const auto outcome = certify_separability(rho, n);
  ASSERT_EQ(outcome.status, CertifyOutcome::Status::kCertified) << outcome.diagnostic;
  const auto& cert = *outcome.certificate;
  EXPECT_LE(cert.residual, bound);
  EXPECT_LE(cert.decomposition.terms.size(), n);
  const ComplexMatrix rebuilt = reconstruct_decomposition(cert.decomposition, n);
  EXPECT_LE(relative_frobenius_error(rebuilt, rho), bound);
  EXPECT_NEAR(rebuilt.trace().real(), rho.trace().real(), 1e-8 * rho.trace().real());
  EXPECT_TRUE(outcome.ppt_report->ppt);
}

TEST(CertifySeparability, CanonicalStates) {
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto cf = testing::random_form(n, 400 + n, DMode::kRandomPd);
    expect_certificate_reproduces(build_canonical_222n(cf), n, 1e-8);
  }
}

TEST(CertifySeparability, DisguisedStates) {
  InstanceOptions options;
  options.disguise = true;
  options.d_mode = DMode::kRandomPd;
  for (std::size_t n = 1; n <= 5; ++n) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto bundle = random_instance(n, 500 * n + seed, options);
      expect_certificate_reproduces(bundle.rho, n, 1e-7);
    }
  }
  expect_certificate_reproduces(kron(testing::projector(ket3(0, 1, 1)), diag({1, 2})), 2, 1e-8);
}

TEST(CertifySeparability, EntangledControlIsNotPpt) {
  const auto bundle = ghz_werner_control(0.9, 2);
  const auto outcome = certify_separability(bundle.rho, 2);
  EXPECT_EQ(outcome.status, CertifyOutcome::Status::kNotPpt);
  EXPECT_FALSE(outcome.certificate.has_value());
  ASSERT_TRUE(outcome.ppt_report.has_value());
  EXPECT_LT(outcome.ppt_report->worst().min_eigenvalue, 0.0);
}

TEST(CertifySeparability, NeverCertifiesAnNptState) {
  for (double p = 0.0; p <= 1.0; p += 0.05) {
    const auto bundle = ghz_werner_control(p, 1);
    const bool ppt = is_ppt(bundle.rho, bundle.shape, kDefaultCertifyTol).ppt;
    const auto outcome = certify_separability(bundle.rho, 1);
    EXPECT_NE(outcome.status, CertifyOutcome::Status::kCertified) << "p=" << p;
    if (!ppt) EXPECT_EQ(outcome.status, CertifyOutcome::Status::kNotPpt) << "p=" << p;
  }
}

TEST(CertifySeparability, RankAboveNIsHypothesisNotMet) {
  const ComplexMatrix canonical = build_canonical_222n(testing::diagonal_form());
  const ComplexMatrix rho = canonical + 0.5 * kron(testing::projector(ket3(0, 0, 0)), diag({1, 0}));
  const auto outcome = certify_separability(rho, 2);
  EXPECT_EQ(outcome.status, CertifyOutcome::Status::kHypothesisNotMet);
  EXPECT_NE(outcome.diagnostic.find("rank hypothesis"), std::string::npos);
  EXPECT_FALSE(outcome.certificate.has_value());
}

TEST(CertifySeparability, InvalidInputs) {
  EXPECT_THROW(certify_separability(diag({1, 1, 1, 1, 1, 1, 1, -1}), 1), NotPsdError);
  EXPECT_THROW(certify_separability(ComplexMatrix::Identity(8, 8), 2), DimensionError);
}

TEST(CertifySeparability, DeterministicForSeed) {
  InstanceOptions options;
  options.disguise = true;
  const auto bundle = random_instance(3, 77, options);
  const auto x = certify_separability(bundle.rho, 3, kDefaultCertifyTol, kDefaultSearchBudget, 5);
  const auto y = certify_separability(bundle.rho, 3, kDefaultCertifyTol, kDefaultSearchBudget, 5);
  ASSERT_TRUE(x.certificate && y.certificate);
  EXPECT_EQ(x.certificate->residual, y.certificate->residual);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(x.certificate->decomposition.terms[k].g, y.certificate->decomposition.terms[k].g);
  }
}

}  // namespace
}  // namespace pptcanon
