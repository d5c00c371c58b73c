#pragma once

#include <cstdint>
#include <vector>

#include "pptcanon/types.hpp"

namespace pptcanon {

struct EigenDecomposition {
  RealVector eigenvalues;  // ascending
  ComplexMatrix vectors;   // columns are eigenvectors
};

struct JacobiOptions {
  int max_sweeps = 60;
};

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Rotations are applied in row-major (p, q) order with p < q on every sweep,
/// so identical input always yields bitwise-identical output. Each returned
/// eigenvector has its largest-modulus component made real positive (the first
/// such component on ties), and eigenvalues are sorted ascending with a
/// stable tiebreak on the pre-sort position.
///
/// Throws NotHermitianError if ||h - h^dagger||_F > tol * ||h||_F and
/// ConvergenceError if the off-diagonal mass does not vanish within
/// max_sweeps.
EigenDecomposition hermitian_eig(const ComplexMatrix& h, double tol = kDefaultTol, JacobiOptions options = {});

struct JointEigenDecomposition {
  ComplexMatrix basis;
  /// eigenvalue_lists[j][n] is the eigenvalue of input j on basis column n.
  std::vector<ComplexVector> eigenvalue_lists;
  int attempts = 0;
};

/// Precondition violation: a pair that does not commute, or a non-normal
/// member (reported with first == second).
class CommutationError : public Error {
 public:
  CommutationError(const std::string& what, std::size_t first, std::size_t second, double residual)
      : Error(what), first_(first), second_(second), residual_(residual) {}

  std::size_t first() const { return first_; }
  std::size_t second() const { return second_; }
  double residual() const { return residual_; }

 private:
  std::size_t first_;
  std::size_t second_;
  double residual_;
};

/// Simultaneously diagonalizes a pairwise-commuting family of normal matrices.
///
/// A seeded random real combination of the Hermitian and anti-Hermitian parts
/// is eigensolved and the resulting basis is accepted once every U^dagger M U
/// is diagonal to tol; an unlucky draw that merges distinct joint eigenvalues
/// is redrawn, up to max_retries times.
JointEigenDecomposition simultaneous_diagonalize(const std::vector<ComplexMatrix>& ms, double tol = kDefaultTol,
                                                 std::uint64_t seed = 0, int max_retries = 8);

/// U diag(sqrt(lambda)) U^dagger, or U diag(1/sqrt(lambda)) U^dagger when
/// inverse is set. Eigenvalues in [-tol ||d||_F, 0) are clipped to zero.
ComplexMatrix sqrt_psd(const ComplexMatrix& d, double tol = kDefaultTol, bool inverse = false);

}  // namespace pptcanon
