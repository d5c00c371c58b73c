#include "pptcanon/instances.hpp"

#include <cmath>

#include "pptcanon/tensor_core.hpp"

namespace pptcanon {

ComplexMatrix haar_unitary(std::size_t n, Rng& rng) {
  if (n == 0) throw InvalidArgumentError("haar_unitary: n must be >= 1");
  const auto side = static_cast<Eigen::Index>(n);
  ComplexMatrix z(side, side);
  for (Eigen::Index j = 0; j < side; ++j) {
    for (Eigen::Index i = 0; i < side; ++i) z(i, j) = rng.complex_normal();
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < side; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

ComplexMatrix haar_unitary(std::size_t n, std::uint64_t seed) {
  Rng rng = Rng::for_stream(seed, Stream::kUnitaries);
  return haar_unitary(n, rng);
}

ComplexMatrix random_invertible(std::size_t n, Rng& rng, double lo, double hi) {
  const ComplexMatrix u = haar_unitary(n, rng);
  const ComplexMatrix w = haar_unitary(n, rng);
  RealVector s(static_cast<Eigen::Index>(n));
  for (Eigen::Index k = 0; k < s.size(); ++k) s(k) = rng.uniform(lo, hi);
  return u * s.cast<Complex>().asDiagonal() * w;
}

CommutingFamily random_commuting_family(std::size_t n, std::uint64_t seed, double scale) {
  if (n == 0) throw InvalidArgumentError("random_commuting_family: n must be >= 1");
  if (!(scale >= 0.0)) throw InvalidArgumentError("random_commuting_family: scale must be >= 0");
  const auto side = static_cast<Eigen::Index>(n);
  Rng unitaries = Rng::for_stream(seed, Stream::kUnitaries);
  Rng values = Rng::for_stream(seed, Stream::kEigenvalues);

  CommutingFamily family;
  family.basis = haar_unitary(n, unitaries);
  family.a_eigenvalues.resize(side);
  family.b_eigenvalues.resize(side);
  family.c_eigenvalues.resize(side);
  for (Eigen::Index k = 0; k < side; ++k) family.a_eigenvalues(k) = values.uniform_disk(scale);
  for (Eigen::Index k = 0; k < side; ++k) family.b_eigenvalues(k) = values.uniform_disk(scale);
  for (Eigen::Index k = 0; k < side; ++k) family.c_eigenvalues(k) = values.uniform_disk(scale);

  const auto& u = family.basis;
  family.a = u * family.a_eigenvalues.asDiagonal() * u.adjoint();
  family.b = u * family.b_eigenvalues.asDiagonal() * u.adjoint();
  family.c = u * family.c_eigenvalues.asDiagonal() * u.adjoint();
  return family;
}

const char* to_string(DMode mode) {
  switch (mode) {
    case DMode::kIdentity: return "identity";
    case DMode::kRandomPd: return "random";
  }
  return "unknown";
}

const char* to_string(InstanceLabel label) {
  switch (label) {
    case InstanceLabel::kCanonical: return "canonical";
    case InstanceLabel::kDisguised: return "disguised";
    case InstanceLabel::kEntangledControl: return "entangled_control";
    case InstanceLabel::kProductControl: return "product_control";
  }
  return "unknown";
}

InstanceBundle random_instance(std::size_t n, std::uint64_t seed, const InstanceOptions& options) {
  if (n == 0) throw InvalidArgumentError("random_instance: n must be >= 1");
  const auto side = static_cast<Eigen::Index>(n);
  const auto family = random_commuting_family(n, seed, options.scale);

  GroundTruth truth;
  truth.cf = {n, family.a, family.b, family.c, ComplexMatrix::Identity(side, side)};
  if (options.d_mode == DMode::kRandomPd) {
    Rng density = Rng::for_stream(seed, Stream::kDensity);
    const ComplexMatrix v = haar_unitary(n, density);
    RealVector spectrum(side);
    for (Eigen::Index k = 0; k < side; ++k) spectrum(k) = density.uniform(0.5, 2.0);
    truth.cf.d = hermitian_part(v * spectrum.cast<Complex>().asDiagonal() * v.adjoint());
  }

  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  truth.disguise_ops = {id2, id2, id2, ComplexMatrix::Identity(side, side)};
  if (options.disguise) {
    Rng disguise = Rng::for_stream(seed, Stream::kDisguise);
    truth.disguise_ops[0] = random_invertible(2, disguise, options.disguise_lo, options.disguise_hi);
    truth.disguise_ops[1] = random_invertible(2, disguise, options.disguise_lo, options.disguise_hi);
    truth.disguise_ops[2] = random_invertible(2, disguise, options.disguise_lo, options.disguise_hi);
    truth.disguise_ops[3] = random_invertible(n, disguise, options.disguise_lo, options.disguise_hi);
  }

  InstanceBundle bundle;
  bundle.shape = shape_222n(n);
  bundle.seed = seed;
  bundle.label = options.disguise ? InstanceLabel::kDisguised : InstanceLabel::kCanonical;
  bundle.rho = build_canonical_222n(truth.cf);
  if (options.disguise) {
    const auto& ops = truth.disguise_ops;
    const ComplexMatrix full = kron_all({ops[0], ops[1], ops[2], ops[3]});
    bundle.rho = hermitian_part(full * bundle.rho * full.adjoint());
  }
  bundle.ground_truth = std::move(truth);
  return bundle;
}

ComplexMatrix ghz_werner(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgumentError("ghz_werner: p must lie in [0, 1]");
  const double mixed = (1.0 - p) / 8.0;
  ComplexMatrix rho = ComplexMatrix::Zero(8, 8);
  for (Eigen::Index i = 0; i < 8; ++i) rho(i, i) = mixed;
  rho(0, 0) += p / 2.0;
  rho(7, 7) += p / 2.0;
  rho(0, 7) = p / 2.0;
  rho(7, 0) = p / 2.0;
  return rho;
}

InstanceBundle ghz_werner_control(double p, std::size_t n) {
  if (n == 0) throw InvalidArgumentError("ghz_werner_control: n must be >= 1");
  InstanceBundle bundle;
  const ComplexVector zero = basis_vector(n, 0);
  bundle.rho = kron(ghz_werner(p), zero * zero.adjoint());
  bundle.shape = shape_222n(n);
  bundle.label = InstanceLabel::kEntangledControl;
  return bundle;
}

InstanceBundle random_product_state(const SystemShape& shape, std::uint64_t seed) {
  Rng rng = Rng::for_stream(seed, Stream::kMatrices);
  std::vector<ComplexMatrix> factors;
  for (std::size_t d : shape.dims()) {
    ComplexMatrix g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.complex_normal();
    }
    ComplexMatrix local = g * g.adjoint();
    factors.push_back(hermitian_part(local / local.trace().real()));
  }
  InstanceBundle bundle;
  bundle.rho = kron_all(factors);
  bundle.shape = shape;
  bundle.seed = seed;
  bundle.label = InstanceLabel::kProductControl;
  return bundle;
}

}  // namespace pptcanon
