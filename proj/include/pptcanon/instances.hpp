#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "pptcanon/canonical.hpp"
#include "pptcanon/rng.hpp"
#include "pptcanon/types.hpp"

namespace pptcanon {

/// Haar-distributed unitary: QR of a standard complex Gaussian matrix with the
/// phases chosen so that R has a positive real diagonal.
ComplexMatrix haar_unitary(std::size_t n, Rng& rng);
ComplexMatrix haar_unitary(std::size_t n, std::uint64_t seed);

/// U diag(s) W with Haar U, W and singular values s uniform in [lo, hi].
ComplexMatrix random_invertible(std::size_t n, Rng& rng, double lo = 0.8, double hi = 1.25);

struct CommutingFamily {
  ComplexMatrix a;
  ComplexMatrix b;
  ComplexMatrix c;
  ComplexMatrix basis;  // shared eigenbasis U
  ComplexVector a_eigenvalues;
  ComplexVector b_eigenvalues;
  ComplexVector c_eigenvalues;
};

/// a = U diag(a_n) U^dagger etc. with one Haar U and eigenvalues uniform on
/// the disk of radius `scale`.
CommutingFamily random_commuting_family(std::size_t n, std::uint64_t seed, double scale = 1.0);

enum class DMode { kIdentity, kRandomPd };
enum class InstanceLabel { kCanonical, kDisguised, kEntangledControl, kProductControl };

const char* to_string(DMode mode);
const char* to_string(InstanceLabel label);

struct InstanceOptions {
  DMode d_mode = DMode::kIdentity;
  bool disguise = false;
  double scale = 1.0;
  /// Singular-value range of the disguise operators.
  double disguise_lo = 0.8;
  double disguise_hi = 1.25;
};

struct GroundTruth {
  CanonicalForm cf;
  /// rho = (L_A x L_B x L_C x L_D) build_canonical_222n(cf) (...)^dagger.
  std::array<ComplexMatrix, 4> disguise_ops;
};

struct InstanceBundle {
  ComplexMatrix rho;
  SystemShape shape;
  std::optional<GroundTruth> ground_truth;
  InstanceLabel label = InstanceLabel::kCanonical;
  std::uint64_t seed = 0;
};

/// Canonical 2x2x2xN state with d = I or d = V diag(uniform[0.5, 2]) V^dagger,
/// optionally conjugated by random local invertible operators. A pure
/// function of (n, seed, options).
InstanceBundle random_instance(std::size_t n, std::uint64_t seed, const InstanceOptions& options = {});

/// p |GHZ><GHZ| + (1 - p) I/8 on 2x2x2.
ComplexMatrix ghz_werner(double p);

/// ghz_werner(p) x |0><0| on 2x2x2xN.
InstanceBundle ghz_werner_control(double p, std::size_t n);

/// rho_A x rho_B x ... with random full-rank single-party states.
InstanceBundle random_product_state(const SystemShape& shape, std::uint64_t seed);

}  // namespace pptcanon
