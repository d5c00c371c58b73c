#pragma once

// Independent reference computations used by the test suites and `selftest`.
// Nothing here calls into the code paths it is used to check.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "pptcanon/types.hpp"

namespace pptcanon::oracles {

/// Roots of the characteristic polynomial of a 2x2 Hermitian matrix, ascending.
inline std::array<double, 2> eigenvalues_2x2(const ComplexMatrix& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const double b2 = std::norm(h(0, 1));
  const double mean = 0.5 * (a + d);
  const double radius = std::sqrt(0.25 * (a - d) * (a - d) + b2);
  return {mean - radius, mean + radius};
}

/// Roots of det(lambda I - h) for a 3x3 Hermitian h via the trigonometric
/// form of the cubic, ascending.
inline std::array<double, 3> eigenvalues_3x3(const ComplexMatrix& h) {
  // lambda^3 - c2 lambda^2 + c1 lambda - c0 = 0
  const double c2 = (h(0, 0) + h(1, 1) + h(2, 2)).real();
  const double c1 = (h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0) + h(0, 0) * h(2, 2) - h(0, 2) * h(2, 0) +
                     h(1, 1) * h(2, 2) - h(1, 2) * h(2, 1))
                        .real();
  const double c0 = (h(0, 0) * (h(1, 1) * h(2, 2) - h(1, 2) * h(2, 1)) -
                     h(0, 1) * (h(1, 0) * h(2, 2) - h(1, 2) * h(2, 0)) +
                     h(0, 2) * (h(1, 0) * h(2, 1) - h(1, 1) * h(2, 0)))
                        .real();
  // Depressed cubic t^3 + p t + q with lambda = t + c2/3.
  const double shift = c2 / 3.0;
  const double p = c1 - c2 * c2 / 3.0;
  const double q = -2.0 * c2 * c2 * c2 / 27.0 + c2 * c1 / 3.0 - c0;
  std::array<double, 3> roots{shift, shift, shift};
  if (p < 0.0) {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) roots[k] = shift + m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// Determinant of a 3x3 matrix by cofactor expansion.
inline Complex det_3x3(const ComplexMatrix& h) {
  return h(0, 0) * (h(1, 1) * h(2, 2) - h(1, 2) * h(2, 1)) - h(0, 1) * (h(1, 0) * h(2, 2) - h(1, 2) * h(2, 0)) +
         h(0, 2) * (h(1, 0) * h(2, 1) - h(1, 1) * h(2, 0));
}

/// Entry-by-entry Kronecker product from the index formula.
inline ComplexMatrix kron_by_index(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
      out(r, c) = a(r / b.rows(), c / b.cols()) * b(r % b.rows(), c % b.cols());
    }
  }
  return out;
}

/// Matrix unit |i><j| of side d.
inline ComplexMatrix matrix_unit(Eigen::Index d, Eigen::Index i, Eigen::Index j) {
  ComplexMatrix e = ComplexMatrix::Zero(d, d);
  e(i, j) = 1.0;
  return e;
}

/// rho^{t_s} = sum_{ij} (I x E_ij x I) rho (I x E_ij x I) for a single
/// subsystem s, built from explicit operator products.
inline ComplexMatrix partial_transpose_by_units(const ComplexMatrix& rho, const std::vector<std::size_t>& dims,
                                                std::size_t s) {
  Eigen::Index left = 1;
  Eigen::Index right = 1;
  for (std::size_t t = 0; t < dims.size(); ++t) {
    if (t < s) left *= static_cast<Eigen::Index>(dims[t]);
    if (t > s) right *= static_cast<Eigen::Index>(dims[t]);
  }
  const auto d = static_cast<Eigen::Index>(dims[s]);
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const ComplexMatrix op = kron_by_index(kron_by_index(ComplexMatrix::Identity(left, left), matrix_unit(d, i, j)),
                                             ComplexMatrix::Identity(right, right));
      out += op * rho * op;
    }
  }
  return out;
}

/// Smallest p in [lo, hi] at which `fails(p)` becomes true, assuming a single
/// crossing; stops once the bracket is narrower than `width`.
template <typename Pred>
inline std::pair<double, double> bisect_threshold(Pred fails, double lo, double hi, double width) {
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (fails(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {lo, hi};
}

}  // namespace pptcanon::oracles
