#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pptcanon/types.hpp"

namespace pptcanon {

/// rho = sqrt(D) W^dagger W sqrt(D) with W = [CBA CB CA C BA B A I], where
/// A, B, C are mutually commuting normal N x N matrices and D is Hermitian
/// PSD. sqrt(D) acts as I_8 x sqrt(D).
struct CanonicalForm {
  std::size_t n = 0;
  ComplexMatrix a;
  ComplexMatrix b;
  ComplexMatrix c;
  ComplexMatrix d;
};

/// Position of an N x N block in the 8 x 8 block grid of a 2x2x2xN state.
struct BlockAddress {
  int a_bit = 0;
  int b_bit = 0;
  int c_bit = 0;

  constexpr std::size_t index() const { return static_cast<std::size_t>(4 * a_bit + 2 * b_bit + c_bit); }
  static constexpr BlockAddress from_index(std::size_t i) {
    return {static_cast<int>((i >> 2) & 1u), static_cast<int>((i >> 1) & 1u), static_cast<int>(i & 1u)};
  }
  std::string ket() const;  // "|011>"
};

/// C^[a_bit=0] B^[b_bit=0] A^[c_bit=0], multiplied in that order.
ComplexMatrix word_matrix(const CanonicalForm& cf, BlockAddress addr);

/// Block (i, j) of side n, 0-based.
ComplexMatrix block(const ComplexMatrix& rho, std::size_t n, std::size_t i, std::size_t j);

struct CommutatorResidual {
  std::string name;   // e.g. "[B,A^dagger]"
  double absolute;    // Frobenius norm
  double relative;    // absolute / (||X||_F ||Y||_F)
};

struct CommutationReport {
  std::array<CommutatorResidual, 9> commutators;
  double d_hermiticity = 0.0;           // ||d - d^dagger||_F
  double d_hermiticity_relative = 0.0;  // divided by ||d||_F
  bool pass = false;

  const CommutatorResidual& worst() const;
};

/// The nine commutator relations on (a, b, c) plus d = d^dagger.
CommutationReport check_commutation(const CanonicalForm& cf, double tol = kDefaultTol);

class InvalidCanonicalFormError : public Error {
 public:
  using Error::Error;
};

/// The 8N x 8N canonical state. Throws InvalidCanonicalFormError on a failed
/// commutation check and NotPsdError if d is indefinite.
ComplexMatrix build_canonical_222n(const CanonicalForm& cf, double tol = kDefaultTol);

/// The 4N x 4N state on 2x2xN with blocks V_i^dagger V_j, V = [BA, B, A, I].
ComplexMatrix build_canonical_22n(const ComplexMatrix& a, const ComplexMatrix& b, double tol = kDefaultTol);

class ExtractionError : public Error {
 public:
  enum class Kind {
    kInvalidState,     // not square 8n, not Hermitian PSD
    kStateRank,        // rank(rho) != n
    kProjectionRank,   // rank(<1,1,1|rho|1,1,1>) != n
    kCommutation,      // read-off a, b, c violate the commutation relations
    kBlockMismatch,    // some block differs from W_i^dagger W_j
  };

  ExtractionError(Kind kind, const std::string& what, double residual = 0.0,
                  std::optional<std::pair<std::size_t, std::size_t>> worst_block = std::nullopt)
      : Error(what), kind_(kind), residual_(residual), worst_block_(worst_block) {}

  Kind kind() const { return kind_; }
  double residual() const { return residual_; }
  /// 0-based block address of the largest mismatch, for kBlockMismatch.
  const std::optional<std::pair<std::size_t, std::size_t>>& worst_block() const { return worst_block_; }

 private:
  Kind kind_;
  double residual_;
  std::optional<std::pair<std::size_t, std::size_t>> worst_block_;
};

const char* to_string(ExtractionError::Kind kind);

struct Extraction {
  /// a, b, c in the gauge where the (|111>, |111>) block is I; d is the
  /// original (pre-gauge) block, so build_canonical_222n(cf) reproduces rho.
  CanonicalForm cf;
  /// d^{-1/2}, the fourth-subsystem operator that sends the (|111>,|111>)
  /// block to I.
  ComplexMatrix gauge;
  /// (I_8 x gauge) rho (I_8 x gauge)^dagger.
  ComplexMatrix gauged_state;
  /// Largest ||block_ij - W_i^dagger W_j||_F / ||gauged_state||_F.
  double max_block_residual = 0.0;
};

/// Recovers (A, B, C, D) from a rank-n PPT state whose |111> projection has
/// rank n. Every failure mode raises ExtractionError with a distinct kind.
Extraction extract_canonical(const ComplexMatrix& rho, std::size_t n, double tol = kDefaultTol);

struct KernelFamilyReport {
  double max_residual = 0.0;  // max ||rho v|| / (||rho||_F ||v||)
  std::size_t span_dimension = 0;
  std::size_t expected_dimension = 0;  // 7N
  /// True when d was positive definite and the vectors were mapped through
  /// I_8 x d^{-1/2}.
  bool gauged = false;
  bool pass = false;
};

/// The 7N vectors |abc>|k> - |111> W_abc |k> (abc != 111), mapped through
/// I_8 x d^{-1/2} when d is positive definite so that they annihilate the
/// un-gauged state. For d = I these are exactly the textbook kernel vectors.
std::vector<ComplexVector> kernel_family(const CanonicalForm& cf, double tol = kDefaultTol);

KernelFamilyReport verify_kernel_family(const ComplexMatrix& rho, const CanonicalForm& cf, double tol = kDefaultTol);

}  // namespace pptcanon
