#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "pptcanon/types.hpp"

namespace pptcanon {

// ---------------------------------------------------------------------------
// Small helpers shared by every module.

double frobenius(const ComplexMatrix& m);

/// Throws DimensionError if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& m, const std::string& what);

void require_square(const ComplexMatrix& m, const std::string& what);

ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// Unit vector |index> in C^dim.
ComplexVector basis_vector(std::size_t dim, std::size_t index);

/// max_ij |x_ij - y_ij| / max(1, max_ij |y_ij|).
double max_entry_error(const ComplexMatrix& x, const ComplexMatrix& y);

/// ||x - y||_F / ||y||_F (or the absolute error when y is zero).
double relative_frobenius_error(const ComplexMatrix& x, const ComplexMatrix& y);

// ---------------------------------------------------------------------------
// Tensor index arithmetic.

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Left-to-right Kronecker product of a non-empty list.
ComplexMatrix kron_all(const std::vector<ComplexMatrix>& factors);

/// Transposes the indices of every subsystem listed in `subsystems`.
ComplexMatrix partial_transpose(const ComplexMatrix& rho, const SystemShape& shape,
                                const std::vector<std::size_t>& subsystems);

/// <v| rho |v> contracted on one subsystem. The result lives on
/// shape.without(subsystem).
ComplexMatrix partial_projection(const ComplexMatrix& rho, const SystemShape& shape, std::size_t subsystem,
                                 const ComplexVector& vector);

/// Projects several subsystems at once. Keys are subsystem indices in the
/// original shape.
ComplexMatrix partial_projection(const ComplexMatrix& rho, const SystemShape& shape,
                                 const std::map<std::size_t, ComplexVector>& vectors);

/// (L_0 x ... x L_{k-1}) rho (L_0 x ... x L_{k-1})^dagger. Every operator must
/// be invertible at `tol`.
ComplexMatrix local_transform(const ComplexMatrix& rho, const SystemShape& shape,
                              const std::vector<ComplexMatrix>& ops, double tol = kDefaultTol);

// ---------------------------------------------------------------------------
// Spectral tests on Hermitian matrices.

struct PsdReport {
  bool is_hermitian = false;
  double min_eigenvalue = 0.0;
  bool is_psd = false;
};

PsdReport psd_check(const ComplexMatrix& m, double tol = kDefaultTol);

struct RankKernel {
  std::size_t rank = 0;
  /// Orthonormal eigenvectors whose eigenvalues are below tol * ||m||_F.
  std::vector<ComplexVector> kernel_basis;
};

RankKernel rank_kernel(const ComplexMatrix& m, double tol = kDefaultTol);

/// Rank only; same decision rule as rank_kernel.
std::size_t hermitian_rank(const ComplexMatrix& m, double tol = kDefaultTol);

struct BipartitionCheck {
  std::vector<std::size_t> subsystems;
  std::string label;  // e.g. "AB"
  double min_eigenvalue = 0.0;
  bool positive = false;
};

struct PptReport {
  std::vector<BipartitionCheck> checks;
  /// Eigenvalues down to -threshold count as non-negative.
  double threshold = 0.0;
  bool ppt = false;

  const BipartitionCheck& worst() const;
};

/// One representative per {S, complement of S} pair, ordered by size then
/// lexicographically: {A},{B},{C},{D},{AB},{AC},{AD} for four parties.
std::vector<std::vector<std::size_t>> bipartition_representatives(std::size_t parties);

std::string subsystem_label(const std::vector<std::size_t>& subsystems);

/// Throws NotPsdError when rho itself is not a valid (PSD) state.
PptReport is_ppt(const ComplexMatrix& rho, const SystemShape& shape, double tol = kDefaultTol);

}  // namespace pptcanon
