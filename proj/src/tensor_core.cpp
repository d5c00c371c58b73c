#include "pptcanon/tensor_core.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <limits>
#include <sstream>

#include "pptcanon/spectral.hpp"

namespace pptcanon {

// ---------------------------------------------------------------------------
// SystemShape

SystemShape::SystemShape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  strides_.assign(dims_.size(), 1);
  total_ = 1;
  for (std::size_t s = dims_.size(); s-- > 0;) {
    if (dims_[s] == 0) throw DimensionError("SystemShape: subsystem dimensions must be >= 1");
    strides_[s] = total_;
    if (total_ > std::numeric_limits<std::size_t>::max() / dims_[s]) {
      throw DimensionError("SystemShape: total dimension overflows");
    }
    total_ *= dims_[s];
  }
}

std::vector<std::size_t> SystemShape::split(std::size_t index) const {
  std::vector<std::size_t> digits(dims_.size());
  for (std::size_t s = 0; s < dims_.size(); ++s) digits[s] = digit(index, s);
  return digits;
}

std::size_t SystemShape::join(const std::vector<std::size_t>& digits) const {
  if (digits.size() != dims_.size()) throw DimensionError("SystemShape::join: wrong number of digits");
  std::size_t index = 0;
  for (std::size_t s = 0; s < dims_.size(); ++s) {
    if (digits[s] >= dims_[s]) throw DimensionError("SystemShape::join: digit out of range");
    index += digits[s] * strides_[s];
  }
  return index;
}

SystemShape SystemShape::without(std::size_t s) const {
  if (s >= dims_.size()) throw DimensionError("SystemShape::without: subsystem out of range");
  std::vector<std::size_t> rest;
  rest.reserve(dims_.size() - 1);
  for (std::size_t t = 0; t < dims_.size(); ++t) {
    if (t != s) rest.push_back(dims_[t]);
  }
  return SystemShape(std::move(rest));
}

std::string SystemShape::to_string() const {
  std::ostringstream out;
  out << '[';
  for (std::size_t s = 0; s < dims_.size(); ++s) out << (s ? "," : "") << dims_[s];
  out << ']';
  return out.str();
}

// ---------------------------------------------------------------------------
// Helpers

double frobenius(const ComplexMatrix& m) { return m.norm(); }

void require_finite(const ComplexMatrix& m, const std::string& what) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
        throw InvalidArgumentError(what + ": matrix contains a non-finite entry");
      }
    }
  }
}

void require_square(const ComplexMatrix& m, const std::string& what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(what + ": expected a square matrix, got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return (m + m.adjoint()) / 2.0; }

ComplexVector basis_vector(std::size_t dim, std::size_t index) {
  if (index >= dim) throw DimensionError("basis_vector: index out of range");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

double max_entry_error(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw DimensionError("max_entry_error: shape mismatch");
  if (x.size() == 0) return 0.0;
  const double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
  return (x - y).cwiseAbs().maxCoeff() / scale;
}

double relative_frobenius_error(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw DimensionError("relative_frobenius_error: shape mismatch");
  }
  const double diff = (x - y).norm();
  const double ref = y.norm();
  return ref > 0.0 ? diff / ref : diff;
}

// ---------------------------------------------------------------------------
// Kronecker products

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  constexpr auto kMax = std::numeric_limits<Eigen::Index>::max();
  if ((b.rows() != 0 && a.rows() > kMax / b.rows()) || (b.cols() != 0 && a.cols() > kMax / b.cols())) {
    throw DimensionError("kron: product dimension overflows");
  }
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix kron_all(const std::vector<ComplexMatrix>& factors) {
  if (factors.empty()) throw DimensionError("kron_all: empty factor list");
  ComplexMatrix out = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) out = kron(out, factors[k]);
  return out;
}

// ---------------------------------------------------------------------------
// Partial operations

namespace {

void require_state_shape(const ComplexMatrix& rho, const SystemShape& shape, const std::string& what) {
  require_square(rho, what);
  if (static_cast<std::size_t>(rho.rows()) != shape.total()) {
    throw DimensionError(what + ": matrix side " + std::to_string(rho.rows()) + " does not match shape " +
                         shape.to_string());
  }
}

}  // namespace

ComplexMatrix partial_transpose(const ComplexMatrix& rho, const SystemShape& shape,
                                const std::vector<std::size_t>& subsystems) {
  require_state_shape(rho, shape, "partial_transpose");
  for (std::size_t s : subsystems) {
    if (s >= shape.size()) throw DimensionError("partial_transpose: subsystem index out of range");
  }
  std::vector<std::size_t> targets = subsystems;
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  const auto side = static_cast<std::size_t>(rho.rows());
  // digits[s][index] for every transposed subsystem.
  std::vector<std::vector<std::size_t>> digits(targets.size(), std::vector<std::size_t>(side));
  for (std::size_t t = 0; t < targets.size(); ++t) {
    for (std::size_t i = 0; i < side; ++i) digits[t][i] = shape.digit(i, targets[t]);
  }

  ComplexMatrix out(rho.rows(), rho.cols());
  for (std::size_t c = 0; c < side; ++c) {
    for (std::size_t r = 0; r < side; ++r) {
      std::size_t r2 = r;
      std::size_t c2 = c;
      for (std::size_t t = 0; t < targets.size(); ++t) {
        const std::size_t stride = shape.stride(targets[t]);
        const std::size_t dr = digits[t][r];
        const std::size_t dc = digits[t][c];
        r2 = r2 - dr * stride + dc * stride;
        c2 = c2 - dc * stride + dr * stride;
      }
      out(static_cast<Eigen::Index>(r2), static_cast<Eigen::Index>(c2)) =
          rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

ComplexMatrix partial_projection(const ComplexMatrix& rho, const SystemShape& shape, std::size_t subsystem,
                                 const ComplexVector& vector) {
  require_state_shape(rho, shape, "partial_projection");
  if (subsystem >= shape.size()) throw DimensionError("partial_projection: subsystem index out of range");
  const std::size_t d = shape.dim(subsystem);
  if (static_cast<std::size_t>(vector.size()) != d) {
    throw DimensionError("partial_projection: vector has dimension " + std::to_string(vector.size()) +
                         ", subsystem has " + std::to_string(d));
  }
  const std::size_t stride = shape.stride(subsystem);
  const std::size_t side = shape.total() / d;
  auto full = [&](std::size_t reduced, std::size_t x) {
    const std::size_t high = reduced / stride;
    const std::size_t low = reduced % stride;
    return static_cast<Eigen::Index>(high * d * stride + x * stride + low);
  };

  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(side), static_cast<Eigen::Index>(side));
  for (std::size_t x = 0; x < d; ++x) {
    const Complex vx = std::conj(vector(static_cast<Eigen::Index>(x)));
    if (vx == Complex(0.0)) continue;
    for (std::size_t y = 0; y < d; ++y) {
      const Complex w = vx * vector(static_cast<Eigen::Index>(y));
      if (w == Complex(0.0)) continue;
      for (std::size_t c = 0; c < side; ++c) {
        const Eigen::Index fc = full(c, y);
        for (std::size_t r = 0; r < side; ++r) {
          out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) += w * rho(full(r, x), fc);
        }
      }
    }
  }
  return out;
}

ComplexMatrix partial_projection(const ComplexMatrix& rho, const SystemShape& shape,
                                 const std::map<std::size_t, ComplexVector>& vectors) {
  ComplexMatrix out = rho;
  SystemShape current = shape;
  // Highest subsystem first so the remaining indices stay valid.
  for (auto it = vectors.rbegin(); it != vectors.rend(); ++it) {
    out = partial_projection(out, current, it->first, it->second);
    current = current.without(it->first);
  }
  return out;
}

ComplexMatrix local_transform(const ComplexMatrix& rho, const SystemShape& shape,
                              const std::vector<ComplexMatrix>& ops, double tol) {
  require_state_shape(rho, shape, "local_transform");
  if (ops.size() != shape.size()) {
    throw DimensionError("local_transform: expected " + std::to_string(shape.size()) + " operators, got " +
                         std::to_string(ops.size()));
  }
  for (std::size_t s = 0; s < ops.size(); ++s) {
    const auto& op = ops[s];
    if (op.rows() != op.cols() || static_cast<std::size_t>(op.rows()) != shape.dim(s)) {
      throw DimensionError("local_transform: operator " + std::to_string(s) + " has the wrong size");
    }
    if (hermitian_rank(op.adjoint() * op, tol) != shape.dim(s)) {
      throw SingularError("local_transform: operator " + std::to_string(s) + " is not invertible");
    }
  }
  const ComplexMatrix full = kron_all(ops);
  return full * rho * full.adjoint();
}

// ---------------------------------------------------------------------------
// Spectral tests

PsdReport psd_check(const ComplexMatrix& m, double tol) {
  require_square(m, "psd_check");
  const double norm = m.norm();
  PsdReport report;
  report.is_hermitian = (m - m.adjoint()).norm() <= tol * norm;
  if (m.size() == 0) {
    report.is_psd = true;
    return report;
  }
  const auto eig = hermitian_eig(hermitian_part(m), tol);
  report.min_eigenvalue = eig.eigenvalues(0);
  report.is_psd = report.is_hermitian && report.min_eigenvalue >= -tol * norm;
  return report;
}

RankKernel rank_kernel(const ComplexMatrix& m, double tol) {
  require_square(m, "rank_kernel");
  RankKernel out;
  if (m.size() == 0) return out;
  const auto eig = hermitian_eig(m, tol);
  const double threshold = tol * m.norm();
  for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
    if (std::abs(eig.eigenvalues(k)) > threshold) {
      ++out.rank;
    } else {
      out.kernel_basis.emplace_back(eig.vectors.col(k));
    }
  }
  return out;
}

std::size_t hermitian_rank(const ComplexMatrix& m, double tol) {
  require_square(m, "hermitian_rank");
  if (m.size() == 0) return 0;
  const auto eig = hermitian_eig(m, tol);
  const double threshold = tol * m.norm();
  return static_cast<std::size_t>((eig.eigenvalues.array().abs() > threshold).count());
}

const BipartitionCheck& PptReport::worst() const {
  if (checks.empty()) throw Error("PptReport::worst: no bipartitions");
  return *std::min_element(checks.begin(), checks.end(),
                           [](const auto& a, const auto& b) { return a.min_eigenvalue < b.min_eigenvalue; });
}

std::vector<std::vector<std::size_t>> bipartition_representatives(std::size_t parties) {
  if (parties > 20) throw DimensionError("bipartition_representatives: too many parties");
  const std::uint32_t all = (1u << parties) - 1u;
  std::vector<std::uint32_t> masks;
  for (std::uint32_t m = 1; m < all; ++m) masks.push_back(m);
  auto as_list = [&](std::uint32_t m) {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < parties; ++s) {
      if (m & (1u << s)) out.push_back(s);
    }
    return out;
  };
  std::sort(masks.begin(), masks.end(), [&](std::uint32_t a, std::uint32_t b) {
    const int pa = std::popcount(a);
    const int pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    return as_list(a) < as_list(b);
  });
  std::vector<std::uint32_t> chosen;
  std::vector<std::vector<std::size_t>> out;
  for (std::uint32_t m : masks) {
    if (std::find(chosen.begin(), chosen.end(), all & ~m) != chosen.end()) continue;
    chosen.push_back(m);
    out.push_back(as_list(m));
  }
  return out;
}

std::string subsystem_label(const std::vector<std::size_t>& subsystems) {
  std::string label;
  for (std::size_t s : subsystems) {
    label += s < 26 ? std::string(1, static_cast<char>('A' + s)) : "[" + std::to_string(s) + "]";
  }
  return label;
}

PptReport is_ppt(const ComplexMatrix& rho, const SystemShape& shape, double tol) {
  require_state_shape(rho, shape, "is_ppt");
  const auto psd = psd_check(rho, tol);
  if (!psd.is_psd) {
    std::ostringstream msg;
    msg << "is_ppt: input is not a valid state (hermitian=" << psd.is_hermitian
        << ", min eigenvalue=" << psd.min_eigenvalue << ")";
    throw NotPsdError(msg.str());
  }
  const ComplexMatrix herm = hermitian_part(rho);
  PptReport report;
  report.threshold = tol * rho.norm();
  report.ppt = true;
  for (auto& subset : bipartition_representatives(shape.size())) {
    BipartitionCheck check;
    check.label = subsystem_label(subset);
    check.min_eigenvalue = hermitian_eig(partial_transpose(herm, shape, subset), tol).eigenvalues(0);
    check.positive = check.min_eigenvalue >= -report.threshold;
    check.subsystems = std::move(subset);
    report.ppt = report.ppt && check.positive;
    report.checks.push_back(std::move(check));
  }
  return report;
}

}  // namespace pptcanon
