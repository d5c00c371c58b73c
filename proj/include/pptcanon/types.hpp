#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pptcanon {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Default relative tolerance for rank, Hermiticity and PSD decisions.
inline constexpr double kDefaultTol = 1e-9;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scalar argument outside its documented range.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// Shapes or sizes that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input required to be Hermitian (or PSD) is not, at the given tolerance.
class NotHermitianError : public Error {
 public:
  using Error::Error;
};

class NotPsdError : public Error {
 public:
  using Error::Error;
};

/// An operator required to be invertible is rank deficient.
class SingularError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Ordered list of subsystem dimensions. Subsystem 0 is the leftmost tensor
/// factor; the composite index of (i_0, ..., i_{k-1}) is
/// sum_s i_s * prod_{t>s} d_t.
class SystemShape {
 public:
  SystemShape() = default;
  SystemShape(std::initializer_list<std::size_t> dims) : SystemShape(std::vector<std::size_t>(dims)) {}
  explicit SystemShape(std::vector<std::size_t> dims);

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t size() const { return dims_.size(); }
  std::size_t dim(std::size_t s) const { return dims_.at(s); }
  std::size_t total() const { return total_; }
  /// Product of the dimensions to the right of subsystem s.
  std::size_t stride(std::size_t s) const { return strides_.at(s); }

  std::size_t digit(std::size_t index, std::size_t s) const { return (index / strides_[s]) % dims_[s]; }
  std::vector<std::size_t> split(std::size_t index) const;
  std::size_t join(const std::vector<std::size_t>& digits) const;

  /// Shape with subsystem s removed.
  SystemShape without(std::size_t s) const;

  std::string to_string() const;

  friend bool operator==(const SystemShape& a, const SystemShape& b) { return a.dims_ == b.dims_; }

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

/// The 2x2x2xN shape used throughout the canonical-form machinery.
inline SystemShape shape_222n(std::size_t n) { return SystemShape{2, 2, 2, n}; }

}  // namespace pptcanon
