#include "pptcanon/separability.hpp"

#include <sstream>

#include "pptcanon/instances.hpp"
#include "pptcanon/rng.hpp"
#include "pptcanon/spectral.hpp"

namespace pptcanon {

namespace {

void require_222n(const ComplexMatrix& rho, std::size_t n, const std::string& what) {
  if (n == 0 || rho.rows() != rho.cols() || static_cast<std::size_t>(rho.rows()) != 8 * n) {
    throw DimensionError(what + ": expected an 8n x 8n matrix with n = " + std::to_string(n) + ", got " +
                         std::to_string(rho.rows()) + "x" + std::to_string(rho.cols()));
  }
  require_finite(rho, what);
}

ComplexVector product_vector(const ProductTerm& t) {
  ComplexVector v(2 * 2 * 2 * t.g.size());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 2; ++j) {
      for (Eigen::Index l = 0; l < 2; ++l) {
        const Complex coef = t.psi(i) * t.phi(j) * t.omega(l);
        v.segment(k, t.g.size()) = coef * t.g;
        k += t.g.size();
      }
    }
  }
  return v;
}

CertifyOutcome hypothesis_not_met(std::string diagnostic, PptReport ppt) {
  CertifyOutcome out;
  out.status = CertifyOutcome::Status::kHypothesisNotMet;
  out.diagnostic = std::move(diagnostic);
  out.ppt_report = std::move(ppt);
  return out;
}

}  // namespace

ComplexMatrix reconstruct_decomposition(const ProductDecomposition& pd, std::size_t n) {
  const auto side = static_cast<Eigen::Index>(8 * n);
  ComplexMatrix out = ComplexMatrix::Zero(side, side);
  for (std::size_t k = 0; k < pd.terms.size(); ++k) {
    const auto& t = pd.terms[k];
    if (t.psi.size() != 2 || t.phi.size() != 2 || t.omega.size() != 2 ||
        static_cast<std::size_t>(t.g.size()) != n) {
      throw DimensionError("reconstruct_decomposition: term " + std::to_string(k) + " has inconsistent dimensions");
    }
    const ComplexVector v = product_vector(t);
    out.noalias() += v * v.adjoint();
  }
  return out;
}

std::vector<WeightedTerm> normalized_terms(const ProductDecomposition& pd) {
  std::vector<WeightedTerm> out;
  for (const auto& t : pd.terms) {
    const double np = t.psi.norm(), nf = t.phi.norm(), no = t.omega.norm(), ng = t.g.norm();
    const double weight = np * np * nf * nf * no * no * ng * ng;
    if (weight == 0.0) continue;
    out.push_back({weight, {t.psi / np, t.phi / nf, t.omega / no, t.g / ng}});
  }
  return out;
}

ProductDecomposition decompose_canonical(const CanonicalForm& cf, double tol, std::uint64_t seed) {
  const auto comm = check_commutation(cf, tol);
  if (!comm.pass) {
    std::ostringstream msg;
    msg << "decompose_canonical: " << comm.worst().name << " has relative residual " << comm.worst().relative;
    throw InvalidCanonicalFormError(msg.str());
  }
  // Throws SingularError unless d is positive definite.
  sqrt_psd(cf.d, tol, /*inverse=*/true);
  const ComplexMatrix root = sqrt_psd(cf.d, tol);

  const auto joint = simultaneous_diagonalize({cf.a, cf.b, cf.c}, tol, seed);
  ProductDecomposition pd;
  pd.terms.reserve(cf.n);
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(cf.n); ++k) {
    const Complex an = joint.eigenvalue_lists[0](k);
    const Complex bn = joint.eigenvalue_lists[1](k);
    const Complex cn = joint.eigenvalue_lists[2](k);
    ProductTerm t;
    // Subsystem A carries C's eigenvalue and subsystem C carries A's.
    t.psi = ComplexVector{{std::conj(cn), Complex(1.0)}};
    t.phi = ComplexVector{{std::conj(bn), Complex(1.0)}};
    t.omega = ComplexVector{{std::conj(an), Complex(1.0)}};
    t.g = root * joint.basis.col(k);
    pd.terms.push_back(std::move(t));
  }
  return pd;
}

std::optional<ProductFrame> find_product_basis(const ComplexMatrix& rho, std::size_t n, double tol, int budget,
                                               std::uint64_t seed) {
  require_222n(rho, n, "find_product_basis");
  const auto psd = psd_check(rho, tol);
  if (!psd.is_psd) throw NotPsdError("find_product_basis: input is not Hermitian PSD");
  const ComplexMatrix herm = hermitian_part(rho);
  const SystemShape shape = shape_222n(n);

  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  if (hermitian_rank(block(herm, n, 7, 7), tol) == n) return ProductFrame{{id2, id2, id2}, 0};

  const ComplexVector one = basis_vector(2, 1);
  for (int trial = 1; trial <= budget; ++trial) {
    Rng rng = Rng::for_stream(seed, Stream::kFrameSearch, static_cast<std::uint64_t>(trial));
    std::array<ComplexMatrix, 3> ops{haar_unitary(2, rng), haar_unitary(2, rng), haar_unitary(2, rng)};
    // <1| U rho U^dagger |1> = <u| rho |u> with u = U^dagger |1>.
    std::map<std::size_t, ComplexVector> vectors;
    for (std::size_t s = 0; s < 3; ++s) vectors.emplace(s, ops[s].adjoint() * one);
    const ComplexMatrix projected = hermitian_part(partial_projection(herm, shape, vectors));
    if (hermitian_rank(projected, tol) == n) return ProductFrame{std::move(ops), trial};
  }
  return std::nullopt;
}

const char* to_string(CertifyOutcome::Status status) {
  switch (status) {
    case CertifyOutcome::Status::kCertified: return "certified";
    case CertifyOutcome::Status::kNotPpt: return "NotPPT";
    case CertifyOutcome::Status::kHypothesisNotMet: return "HypothesisNotMet";
  }
  return "unknown";
}

CertifyOutcome certify_separability(const ComplexMatrix& rho, std::size_t n, double tol, int budget,
                                    std::uint64_t seed) {
  require_222n(rho, n, "certify_separability");
  const SystemShape shape = shape_222n(n);

  PptReport ppt = is_ppt(rho, shape, tol);
  if (!ppt.ppt) {
    const auto& w = ppt.worst();
    std::ostringstream msg;
    msg << "partial transpose over " << w.label << " has eigenvalue " << w.min_eigenvalue;
    CertifyOutcome out;
    out.status = CertifyOutcome::Status::kNotPpt;
    out.diagnostic = msg.str();
    out.ppt_report = std::move(ppt);
    return out;
  }

  const ComplexMatrix herm = hermitian_part(rho);
  const std::size_t rank = hermitian_rank(herm, tol);
  if (rank != n) {
    return hypothesis_not_met(
        "rank hypothesis: rank(rho) = " + std::to_string(rank) + ", expected " + std::to_string(n), std::move(ppt));
  }

  const auto frame = find_product_basis(herm, n, tol, budget, seed);
  if (!frame) {
    return hypothesis_not_met("no product frame with a rank-" + std::to_string(n) + " |111> projection found in " +
                                  std::to_string(budget) + " trials (inconclusive)",
                              std::move(ppt));
  }
  const ComplexMatrix id_n = ComplexMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const ComplexMatrix framed =
      hermitian_part(local_transform(herm, shape, {frame->ops[0], frame->ops[1], frame->ops[2], id_n}, tol));

  Extraction extraction;
  ProductDecomposition canonical_terms;
  try {
    extraction = extract_canonical(framed, n, tol);
    CanonicalForm gauged = extraction.cf;
    gauged.d = id_n;
    canonical_terms = decompose_canonical(gauged, tol, seed);
  } catch (const ExtractionError& e) {
    return hypothesis_not_met(std::string(to_string(e.kind())) + ": " + e.what(), std::move(ppt));
  } catch (const Error& e) {
    return hypothesis_not_met(std::string("decomposition failed: ") + e.what(), std::move(ppt));
  }

  SeparabilityCertificate cert;
  cert.n = n;
  cert.tol = tol;
  cert.seed = seed;
  cert.frame_trial = frame->trial;
  cert.local_ops = {frame->ops[0], frame->ops[1], frame->ops[2], extraction.gauge};

  std::array<Eigen::PartialPivLU<ComplexMatrix>, 4> inverses{
      Eigen::PartialPivLU<ComplexMatrix>(cert.local_ops[0]), Eigen::PartialPivLU<ComplexMatrix>(cert.local_ops[1]),
      Eigen::PartialPivLU<ComplexMatrix>(cert.local_ops[2]), Eigen::PartialPivLU<ComplexMatrix>(cert.local_ops[3])};
  for (auto& t : canonical_terms.terms) {
    cert.decomposition.terms.push_back({inverses[0].solve(t.psi), inverses[1].solve(t.phi),
                                        inverses[2].solve(t.omega), inverses[3].solve(t.g)});
  }
  cert.residual = relative_frobenius_error(reconstruct_decomposition(cert.decomposition, n), herm);
  cert.ppt_report = ppt;

  if (!(cert.residual <= tol)) {
    std::ostringstream msg;
    msg << "reconstruction residual " << cert.residual << " exceeds tolerance " << tol;
    return hypothesis_not_met(msg.str(), std::move(ppt));
  }
  CertifyOutcome out;
  out.status = CertifyOutcome::Status::kCertified;
  out.ppt_report = std::move(ppt);
  out.certificate = std::move(cert);
  return out;
}

}  // namespace pptcanon
