#include "pptcanon/canonical.hpp"

#include <algorithm>
#include <sstream>

#include "pptcanon/spectral.hpp"
#include "pptcanon/tensor_core.hpp"

namespace pptcanon {

namespace {

constexpr std::size_t kBlocks = 8;

void require_form_shape(const CanonicalForm& cf, const std::string& what) {
  const auto n = static_cast<Eigen::Index>(cf.n);
  for (const ComplexMatrix* m : {&cf.a, &cf.b, &cf.c, &cf.d}) {
    if (m->rows() != n || m->cols() != n) {
      throw DimensionError(what + ": canonical-form matrices must all be " + std::to_string(cf.n) + "x" +
                           std::to_string(cf.n));
    }
    require_finite(*m, what);
  }
  if (cf.n == 0) throw DimensionError(what + ": n must be >= 1");
}

double commutator_norm(const ComplexMatrix& x, const ComplexMatrix& y) { return (x * y - y * x).norm(); }

CommutatorResidual residual(std::string name, const ComplexMatrix& x, const ComplexMatrix& y) {
  const double abs = commutator_norm(x, y);
  const double scale = x.norm() * y.norm();
  return {std::move(name), abs, scale > 0.0 ? abs / scale : abs};
}

std::string describe(const CommutationReport& report) {
  const auto& w = report.worst();
  std::ostringstream msg;
  msg << w.name << " has relative residual " << w.relative;
  if (report.d_hermiticity_relative > w.relative) {
    msg << "; d is not Hermitian (relative residual " << report.d_hermiticity_relative << ")";
  }
  return msg.str();
}

// The 1 x 8 block row [W_000 ... W_111] as an N x 8N matrix.
ComplexMatrix word_row(const CanonicalForm& cf) {
  const auto n = static_cast<Eigen::Index>(cf.n);
  ComplexMatrix row(n, 8 * n);
  for (std::size_t i = 0; i < kBlocks; ++i) {
    row.middleCols(static_cast<Eigen::Index>(i) * n, n) = word_matrix(cf, BlockAddress::from_index(i));
  }
  return row;
}

}  // namespace

std::string BlockAddress::ket() const {
  return "|" + std::to_string(a_bit) + std::to_string(b_bit) + std::to_string(c_bit) + ">";
}

ComplexMatrix word_matrix(const CanonicalForm& cf, BlockAddress addr) {
  const auto n = static_cast<Eigen::Index>(cf.n);
  ComplexMatrix w = ComplexMatrix::Identity(n, n);
  if (addr.a_bit == 0) w = w * cf.c;
  if (addr.b_bit == 0) w = w * cf.b;
  if (addr.c_bit == 0) w = w * cf.a;
  return w;
}

ComplexMatrix block(const ComplexMatrix& rho, std::size_t n, std::size_t i, std::size_t j) {
  const auto side = static_cast<Eigen::Index>(n);
  if (static_cast<Eigen::Index>((std::max(i, j) + 1) * n) > std::min(rho.rows(), rho.cols())) {
    throw DimensionError("block: address out of range");
  }
  return rho.block(static_cast<Eigen::Index>(i) * side, static_cast<Eigen::Index>(j) * side, side, side);
}

const CommutatorResidual& CommutationReport::worst() const {
  return *std::max_element(commutators.begin(), commutators.end(),
                           [](const auto& x, const auto& y) { return x.relative < y.relative; });
}

CommutationReport check_commutation(const CanonicalForm& cf, double tol) {
  require_form_shape(cf, "check_commutation");
  const ComplexMatrix ad = cf.a.adjoint();
  const ComplexMatrix bd = cf.b.adjoint();
  const ComplexMatrix cd = cf.c.adjoint();
  CommutationReport report{{
      residual("[A,A^dagger]", cf.a, ad),
      residual("[B,B^dagger]", cf.b, bd),
      residual("[C,C^dagger]", cf.c, cd),
      residual("[B,A]", cf.b, cf.a),
      residual("[B,A^dagger]", cf.b, ad),
      residual("[C,A]", cf.c, cf.a),
      residual("[C,A^dagger]", cf.c, ad),
      residual("[C,B]", cf.c, cf.b),
      residual("[C,B^dagger]", cf.c, bd),
  }};
  report.d_hermiticity = (cf.d - cf.d.adjoint()).norm();
  const double dn = cf.d.norm();
  report.d_hermiticity_relative = dn > 0.0 ? report.d_hermiticity / dn : report.d_hermiticity;
  report.pass = report.d_hermiticity_relative <= tol &&
                std::all_of(report.commutators.begin(), report.commutators.end(),
                            [&](const auto& r) { return r.relative <= tol; });
  return report;
}

ComplexMatrix build_canonical_222n(const CanonicalForm& cf, double tol) {
  const auto report = check_commutation(cf, tol);
  if (!report.pass) throw InvalidCanonicalFormError("build_canonical_222n: " + describe(report));
  const ComplexMatrix root = sqrt_psd(cf.d, tol);
  const auto n = static_cast<Eigen::Index>(cf.n);

  // R = W (I_8 x sqrt(D)); rho = R^dagger R.
  ComplexMatrix r = word_row(cf);
  for (std::size_t i = 0; i < kBlocks; ++i) {
    auto cols = r.middleCols(static_cast<Eigen::Index>(i) * n, n);
    cols = cols * root;
  }
  return hermitian_part(r.adjoint() * r);
}

ComplexMatrix build_canonical_22n(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  require_square(a, "build_canonical_22n");
  if (b.rows() != a.rows() || b.cols() != a.cols()) throw DimensionError("build_canonical_22n: a and b differ in size");
  const auto n = a.rows();
  const ComplexMatrix ad = a.adjoint();
  const ComplexMatrix bd = b.adjoint();
  const std::array<CommutatorResidual, 4> checks{
      residual("[A,A^dagger]", a, ad),
      residual("[B,B^dagger]", b, bd),
      residual("[B,A]", b, a),
      residual("[B,A^dagger]", b, ad),
  };
  for (const auto& c : checks) {
    if (c.relative > tol) {
      std::ostringstream msg;
      msg << "build_canonical_22n: " << c.name << " has relative residual " << c.relative;
      throw InvalidCanonicalFormError(msg.str());
    }
  }
  ComplexMatrix v(n, 4 * n);
  v.middleCols(0, n) = b * a;
  v.middleCols(n, n) = b;
  v.middleCols(2 * n, n) = a;
  v.middleCols(3 * n, n) = ComplexMatrix::Identity(n, n);
  return hermitian_part(v.adjoint() * v);
}

const char* to_string(ExtractionError::Kind kind) {
  switch (kind) {
    case ExtractionError::Kind::kInvalidState: return "invalid state";
    case ExtractionError::Kind::kStateRank: return "rank hypothesis (state)";
    case ExtractionError::Kind::kProjectionRank: return "rank hypothesis (|111> projection)";
    case ExtractionError::Kind::kCommutation: return "commutation";
    case ExtractionError::Kind::kBlockMismatch: return "block mismatch";
  }
  return "unknown";
}

Extraction extract_canonical(const ComplexMatrix& rho, std::size_t n, double tol) {
  using Kind = ExtractionError::Kind;
  if (n == 0 || rho.rows() != rho.cols() || static_cast<std::size_t>(rho.rows()) != 8 * n) {
    throw ExtractionError(Kind::kInvalidState, "extract_canonical: expected an 8n x 8n matrix with n = " +
                                                   std::to_string(n));
  }
  require_finite(rho, "extract_canonical");
  const auto psd = psd_check(rho, tol);
  if (!psd.is_psd) {
    std::ostringstream msg;
    msg << "extract_canonical: input is not Hermitian PSD (min eigenvalue " << psd.min_eigenvalue << ")";
    throw ExtractionError(Kind::kInvalidState, msg.str());
  }
  const ComplexMatrix herm = hermitian_part(rho);

  const std::size_t rank = hermitian_rank(herm, tol);
  if (rank != n) {
    throw ExtractionError(Kind::kStateRank, "extract_canonical: rank hypothesis failed: rank(rho) = " +
                                                std::to_string(rank) + ", expected " + std::to_string(n));
  }
  const ComplexMatrix e8 = block(herm, n, 7, 7);
  const std::size_t e8_rank = hermitian_rank(e8, tol);
  if (e8_rank != n) {
    throw ExtractionError(Kind::kProjectionRank,
                          "extract_canonical: rank hypothesis failed: rank(<1,1,1|rho|1,1,1>) = " +
                              std::to_string(e8_rank) + ", expected " + std::to_string(n));
  }

  Extraction out;
  try {
    out.gauge = sqrt_psd(e8, tol, /*inverse=*/true);
  } catch (const Error& e) {
    throw ExtractionError(Kind::kProjectionRank, std::string("extract_canonical: rank hypothesis failed: ") + e.what());
  }
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  out.gauged_state = hermitian_part(local_transform(herm, shape_222n(n), {id2, id2, id2, out.gauge}, tol));

  out.cf.n = n;
  out.cf.a = block(out.gauged_state, n, 7, 6);
  out.cf.b = block(out.gauged_state, n, 7, 5);
  out.cf.c = block(out.gauged_state, n, 7, 3);
  out.cf.d = e8;

  const auto comm = check_commutation(out.cf, tol);
  if (!comm.pass) {
    throw ExtractionError(Kind::kCommutation, "extract_canonical: " + describe(comm), comm.worst().relative);
  }

  const ComplexMatrix row = word_row(out.cf);
  const auto side = static_cast<Eigen::Index>(n);
  const double scale = out.gauged_state.norm();
  std::pair<std::size_t, std::size_t> worst{0, 0};
  for (std::size_t i = 0; i < kBlocks; ++i) {
    const auto wi = row.middleCols(static_cast<Eigen::Index>(i) * side, side);
    for (std::size_t j = 0; j < kBlocks; ++j) {
      const auto wj = row.middleCols(static_cast<Eigen::Index>(j) * side, side);
      const double r = (block(out.gauged_state, n, i, j) - wi.adjoint() * wj).norm() / scale;
      if (r > out.max_block_residual) {
        out.max_block_residual = r;
        worst = {i, j};
      }
    }
  }
  if (out.max_block_residual > tol) {
    std::ostringstream msg;
    msg << "extract_canonical: block (" << worst.first + 1 << "," << worst.second + 1 << ") ["
        << BlockAddress::from_index(worst.first).ket() << "," << BlockAddress::from_index(worst.second).ket()
        << "] differs from the canonical form by relative " << out.max_block_residual;
    throw ExtractionError(Kind::kBlockMismatch, msg.str(), out.max_block_residual, worst);
  }
  return out;
}

std::vector<ComplexVector> kernel_family(const CanonicalForm& cf, double tol) {
  require_form_shape(cf, "kernel_family");
  const auto n = static_cast<Eigen::Index>(cf.n);
  ComplexMatrix gauge = ComplexMatrix::Identity(n, n);
  try {
    gauge = sqrt_psd(cf.d, tol, /*inverse=*/true);
  } catch (const Error&) {
    // Singular d: fall back to the ungauged vectors.
  }

  // Order: |001>, |010>, |011>, |100>, |101>, |110>, |000>.
  constexpr std::array<std::size_t, 7> kAddresses{1, 2, 3, 4, 5, 6, 0};
  std::vector<ComplexVector> out;
  out.reserve(7 * cf.n);
  for (std::size_t idx : kAddresses) {
    const ComplexMatrix w = word_matrix(cf, BlockAddress::from_index(idx));
    for (Eigen::Index k = 0; k < n; ++k) {
      ComplexVector v = ComplexVector::Zero(8 * n);
      v.segment(static_cast<Eigen::Index>(idx) * n, n) = gauge.col(k);
      v.segment(7 * n, n) = -gauge * w.col(k);
      out.push_back(std::move(v));
    }
  }
  return out;
}

KernelFamilyReport verify_kernel_family(const ComplexMatrix& rho, const CanonicalForm& cf, double tol) {
  require_form_shape(cf, "verify_kernel_family");
  if (rho.rows() != rho.cols() || static_cast<std::size_t>(rho.rows()) != 8 * cf.n) {
    throw DimensionError("verify_kernel_family: rho must be 8n x 8n");
  }
  KernelFamilyReport report;
  report.expected_dimension = 7 * cf.n;
  report.gauged = psd_check(cf.d, tol).min_eigenvalue > tol * cf.d.norm();

  const auto vectors = kernel_family(cf, tol);
  const double rho_norm = rho.norm();
  ComplexMatrix stacked(rho.rows(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    const auto& v = vectors[k];
    const double denom = rho_norm * v.norm();
    const double r = denom > 0.0 ? (rho * v).norm() / denom : (rho * v).norm();
    report.max_residual = std::max(report.max_residual, r);
    stacked.col(static_cast<Eigen::Index>(k)) = v;
  }
  report.span_dimension = hermitian_rank(hermitian_part(stacked.adjoint() * stacked), tol);
  report.pass = report.max_residual <= tol && report.span_dimension == report.expected_dimension;
  return report;
}

}  // namespace pptcanon
