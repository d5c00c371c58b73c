#include "pptcanon/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "pptcanon/rng.hpp"
#include "pptcanon/tensor_core.hpp"

namespace pptcanon {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (Eigen::Index q = 1; q < a.cols(); ++q) {
    for (Eigen::Index p = 0; p < q; ++p) sum += std::norm(a(p, q));
  }
  return std::sqrt(2.0 * sum);
}

// Zeroes a(p, q) with the unitary J = diag(1, conj(e)) * [[c, s], [-s, c]]
// acting on the (p, q) plane, where e is the phase of a(p, q). Accumulates J
// into v.
void rotate(ComplexMatrix& a, ComplexMatrix& v, Eigen::Index p, Eigen::Index q) {
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  const Complex e = apq / mag;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double theta = (aqq - app) / (2.0 * mag);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const Complex jpp = c;
  const Complex jpq = s;
  const Complex jqp = -s * std::conj(e);
  const Complex jqq = c * std::conj(e);

  // Outside the (p, q) block, J^dagger A J only mixes columns p and q (and,
  // mirrored, rows p and q).
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    const Complex new_kp = akp * jpp + akq * jqp;
    const Complex new_kq = akp * jpq + akq * jqq;
    a(k, p) = new_kp;
    a(k, q) = new_kq;
    a(p, k) = std::conj(new_kp);
    a(q, k) = std::conj(new_kq);
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = app - t * mag;
  a(q, q) = aqq + t * mag;

  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * jpp + vkq * jqp;
    v(k, q) = vkp * jpq + vkq * jqq;
  }
}

void fix_phase(ComplexMatrix& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      const double m = std::abs(vectors(i, j));
      if (m > best_abs) {
        best_abs = m;
        best = i;
      }
    }
    if (best_abs <= 0.0) continue;
    const Complex rot = std::conj(vectors(best, j)) / best_abs;
    vectors.col(j) *= rot;
    vectors(best, j) = best_abs;
  }
}

}  // namespace

EigenDecomposition hermitian_eig(const ComplexMatrix& h, double tol, JacobiOptions options) {
  require_square(h, "hermitian_eig");
  require_finite(h, "hermitian_eig");
  const double norm = h.norm();
  const double asym = (h - h.adjoint()).norm();
  if (asym > tol * norm) {
    std::ostringstream msg;
    msg << "hermitian_eig: input is not Hermitian (||h - h^dagger||_F = " << asym << ", ||h||_F = " << norm << ")";
    throw NotHermitianError(msg.str());
  }

  const Eigen::Index n = h.rows();
  ComplexMatrix a = hermitian_part(h);
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = a(i, i).real();
  ComplexMatrix v = ComplexMatrix::Identity(n, n);

  bool converged = norm == 0.0 || n <= 1;
  for (int sweep = 0; sweep < options.max_sweeps && !converged; ++sweep) {
    if (off_diagonal_norm(a) <= kEps * norm) {
      converged = true;
      break;
    }
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag == 0.0) continue;
        // After the first few sweeps an element below half an ulp of both
        // diagonal entries cannot move them; drop it.
        const double app = std::abs(a(p, p).real());
        const double aqq = std::abs(a(q, q).real());
        if (sweep > 3 && mag <= 0.5 * kEps * app && mag <= 0.5 * kEps * aqq) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        rotate(a, v, p, q);
        rotated = true;
      }
    }
    if (!rotated) converged = true;
  }
  if (!converged && off_diagonal_norm(a) > kEps * norm) {
    throw ConvergenceError("hermitian_eig: no convergence after " + std::to_string(options.max_sweeps) + " sweeps");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x).real() < a(y, y).real(); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = a(src, src).real();
    out.vectors.col(k) = v.col(src);
  }
  fix_phase(out.vectors);
  return out;
}

JointEigenDecomposition simultaneous_diagonalize(const std::vector<ComplexMatrix>& ms, double tol,
                                                 std::uint64_t seed, int max_retries) {
  if (ms.empty()) throw DimensionError("simultaneous_diagonalize: empty family");
  const Eigen::Index n = ms.front().rows();
  std::vector<double> norms;
  for (const auto& m : ms) {
    require_square(m, "simultaneous_diagonalize");
    require_finite(m, "simultaneous_diagonalize");
    if (m.rows() != n) throw DimensionError("simultaneous_diagonalize: matrices differ in size");
    norms.push_back(m.norm());
  }

  for (std::size_t i = 0; i < ms.size(); ++i) {
    const double normal = (ms[i] * ms[i].adjoint() - ms[i].adjoint() * ms[i]).norm();
    if (normal > tol * norms[i] * norms[i]) {
      std::ostringstream msg;
      msg << "simultaneous_diagonalize: matrix " << i << " is not normal (||[M, M^dagger]||_F = " << normal << ")";
      throw CommutationError(msg.str(), i, i, normal);
    }
    for (std::size_t j = i + 1; j < ms.size(); ++j) {
      const double comm = (ms[i] * ms[j] - ms[j] * ms[i]).norm();
      if (comm > tol * norms[i] * norms[j]) {
        std::ostringstream msg;
        msg << "simultaneous_diagonalize: matrices " << i << " and " << j
            << " do not commute (||[M_i, M_j]||_F = " << comm << ")";
        throw CommutationError(msg.str(), i, j, comm);
      }
    }
  }

  const double max_norm = *std::max_element(norms.begin(), norms.end());
  const Complex minus_half_i(0.0, -0.5);
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    Rng rng = Rng::for_stream(seed, Stream::kJointDiagonalization, static_cast<std::uint64_t>(attempt));
    ComplexMatrix h = ComplexMatrix::Zero(n, n);
    for (std::size_t j = 0; j < ms.size(); ++j) {
      const double alpha = rng.normal();
      const double beta = rng.normal();
      if (norms[j] == 0.0) continue;
      const ComplexMatrix herm = (ms[j] + ms[j].adjoint()) * 0.5;
      const ComplexMatrix anti = (ms[j] - ms[j].adjoint()) * minus_half_i;
      h += (alpha * herm + beta * anti) / norms[j];
    }
    const auto eig = hermitian_eig(hermitian_part(h), tol);

    JointEigenDecomposition out;
    out.basis = eig.vectors;
    out.attempts = attempt + 1;
    bool ok = true;
    for (std::size_t j = 0; j < ms.size() && ok; ++j) {
      const ComplexMatrix t = out.basis.adjoint() * ms[j] * out.basis;
      const ComplexVector diag = t.diagonal();
      ComplexMatrix off = t;
      off.diagonal().setZero();
      const double scale = std::max(norms[j], 1e-12 * max_norm);
      ok = off.norm() <= tol * scale;
      out.eigenvalue_lists.push_back(diag);
    }
    if (ok) return out;
  }
  throw ConvergenceError("simultaneous_diagonalize: no separating combination found after " +
                         std::to_string(max_retries + 1) + " draws");
}

ComplexMatrix sqrt_psd(const ComplexMatrix& d, double tol, bool inverse) {
  require_square(d, "sqrt_psd");
  const auto eig = hermitian_eig(d, tol);
  const double norm = d.norm();
  const Eigen::Index n = d.rows();
  if (n == 0) return d;
  const double lo = eig.eigenvalues(0);
  if (lo < -tol * norm) {
    std::ostringstream msg;
    msg << "sqrt_psd: matrix is indefinite (min eigenvalue " << lo << ")";
    throw NotPsdError(msg.str());
  }
  if (inverse && !(lo > tol * norm)) {
    std::ostringstream msg;
    msg << "sqrt_psd: matrix is singular (min eigenvalue " << lo << "), inverse square root undefined";
    throw SingularError(msg.str());
  }
  RealVector f(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lambda = std::max(eig.eigenvalues(k), 0.0);
    f(k) = inverse ? 1.0 / std::sqrt(lambda) : std::sqrt(lambda);
  }
  const ComplexMatrix out = eig.vectors * f.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  return hermitian_part(out);
}

}  // namespace pptcanon
