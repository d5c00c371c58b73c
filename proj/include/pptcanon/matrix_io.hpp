#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "pptcanon/canonical.hpp"
#include "pptcanon/instances.hpp"
#include "pptcanon/separability.hpp"
#include "pptcanon/types.hpp"

namespace pptcanon {

/// Malformed or inconsistent file contents.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// The file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

struct MatrixFile {
  SystemShape shape;
  ComplexMatrix matrix;
};

/// Shortest decimal that reads back to the same double (at most 17
/// significant digits). Negative zero is written as "-0.0" so that it
/// survives JSON readers that parse "-0" as an integer. Throws FormatError on
/// NaN or infinity.
std::string format_number(double x);

/// Appends [[[re,im],...],...] (row-major).
void append_matrix(std::string& out, const ComplexMatrix& m);
/// Appends [[re,im],...].
void append_vector(std::string& out, const ComplexVector& v);

ComplexMatrix parse_matrix(const nlohmann::json& j, const std::string& what);
ComplexVector parse_vector(const nlohmann::json& j, const std::string& what);

/// {"dims":[...],"matrix":[...]} followed by a single newline.
std::string format_matrix_file(const ComplexMatrix& m, const SystemShape& shape);
void write_matrix_file(std::ostream& out, const ComplexMatrix& m, const SystemShape& shape);
void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& m, const SystemShape& shape);

MatrixFile parse_matrix_file(const std::string& text);
MatrixFile read_matrix_file(std::istream& in);
MatrixFile read_matrix_file(const std::filesystem::path& path);

// Structured companions, same number format.

struct CanonicalFile {
  CanonicalForm cf;
  ComplexMatrix gauge;
};

std::string format_canonical_file(const CanonicalForm& cf, const ComplexMatrix& gauge);
CanonicalFile parse_canonical_file(const std::string& text);

std::string format_ground_truth(const InstanceBundle& bundle);

std::string format_certificate(const SeparabilityCertificate& cert);
SeparabilityCertificate parse_certificate(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace pptcanon
