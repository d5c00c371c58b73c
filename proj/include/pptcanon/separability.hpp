#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pptcanon/canonical.hpp"
#include "pptcanon/tensor_core.hpp"
#include "pptcanon/types.hpp"

namespace pptcanon {

/// One elementary tensor psi x phi x omega x g. Vectors are unnormalized; the
/// term's weight is the product of their squared norms.
struct ProductTerm {
  ComplexVector psi;    // C^2, subsystem A
  ComplexVector phi;    // C^2, subsystem B
  ComplexVector omega;  // C^2, subsystem C
  ComplexVector g;      // C^N, subsystem D
};

struct ProductDecomposition {
  std::vector<ProductTerm> terms;
};

/// sum_n |psi_n><psi_n| x |phi_n><phi_n| x |omega_n><omega_n| x |g_n><g_n|.
ComplexMatrix reconstruct_decomposition(const ProductDecomposition& pd, std::size_t n);

struct WeightedTerm {
  double weight;
  ProductTerm unit;  // every vector normalized
};

/// Splits each term's weight out of its vector norms. Zero terms are dropped.
std::vector<WeightedTerm> normalized_terms(const ProductDecomposition& pd);

/// Decomposes a canonical form into N product terms via the common eigenbasis
/// f_n of (a, b, c): psi = (c_n*, 1), phi = (b_n*, 1), omega = (a_n*, 1),
/// g = sqrt(d) f_n.
ProductDecomposition decompose_canonical(const CanonicalForm& cf, double tol = kDefaultTol, std::uint64_t seed = 0);

struct ProductFrame {
  /// Unitaries (L_A, L_B, L_C); the frame is (L_A x L_B x L_C x I) rho (...)^dagger.
  std::array<ComplexMatrix, 3> ops;
  /// 0 for the identity frame, otherwise the 1-based random trial.
  int trial = 0;
};

inline constexpr int kDefaultSearchBudget = 200;
inline constexpr double kDefaultCertifyTol = 1e-7;

/// Looks for a local unitary frame in which <1,1,1|rho|1,1,1> has rank n: the
/// identity first, then up to `budget` seeded Haar triples. std::nullopt means
/// the search gave up; it says nothing about whether such a frame exists.
std::optional<ProductFrame> find_product_basis(const ComplexMatrix& rho, std::size_t n, double tol = kDefaultTol,
                                               int budget = kDefaultSearchBudget, std::uint64_t seed = 0);

struct SeparabilityCertificate {
  std::size_t n = 0;
  ProductDecomposition decomposition;
  /// (L_A, L_B, L_C, S): the state in the canonical frame with d = I is
  /// (L_A x L_B x L_C x S) rho (...)^dagger.
  std::array<ComplexMatrix, 4> local_ops;
  double residual = 0.0;  // ||rho - reconstruct||_F / ||rho||_F
  double tol = kDefaultCertifyTol;
  std::uint64_t seed = 0;
  int frame_trial = 0;
  PptReport ppt_report;
};

struct CertifyOutcome {
  enum class Status { kCertified, kNotPpt, kHypothesisNotMet };

  Status status = Status::kHypothesisNotMet;
  std::optional<SeparabilityCertificate> certificate;
  std::optional<PptReport> ppt_report;  // absent only when rho was not a valid state
  std::string diagnostic;
};

const char* to_string(CertifyOutcome::Status status);

/// Runs the full pipeline on an 8n x 8n state: PPT gate, rank check, frame
/// search, extraction, decomposition, pullback and reconstruction check.
/// Throws NotPsdError when rho is not a valid state.
CertifyOutcome certify_separability(const ComplexMatrix& rho, std::size_t n, double tol = kDefaultCertifyTol,
                                    int budget = kDefaultSearchBudget, std::uint64_t seed = 0);

}  // namespace pptcanon
