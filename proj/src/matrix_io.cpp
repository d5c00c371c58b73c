#include "pptcanon/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace pptcanon {

using nlohmann::json;

namespace {

double parse_number(const json& j, const std::string& what) {
  if (!j.is_number()) throw FormatError(what + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw FormatError(what + ": non-finite number");
  return x;
}

Complex parse_complex(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) throw FormatError(what + ": expected a [re, im] pair");
  return {parse_number(j[0], what), parse_number(j[1], what)};
}

void append_complex(std::string& out, Complex z) {
  out += '[';
  out += format_number(z.real());
  out += ',';
  out += format_number(z.imag());
  out += ']';
}

const json& field(const json& j, const char* key, const std::string& what) {
  if (!j.is_object()) throw FormatError(what + ": expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(what + ": missing key \"" + key + "\"");
  return *it;
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(what + ": malformed text: " + e.what());
  }
}

}  // namespace

std::string format_number(double x) {
  if (!std::isfinite(x)) throw FormatError("format_number: non-finite value");
  if (x == 0.0) return std::signbit(x) ? "-0.0" : "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void append_matrix(std::string& out, const ComplexMatrix& m) {
  out += '[';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) out += ',';
    out += '[';
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      append_complex(out, m(i, j));
    }
    out += ']';
  }
  out += ']';
}

void append_vector(std::string& out, const ComplexVector& v) {
  out += '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    append_complex(out, v(i));
  }
  out += ']';
}

ComplexMatrix parse_matrix(const json& j, const std::string& what) {
  if (!j.is_array()) throw FormatError(what + ": expected a list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows ? static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0) : 0;
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw FormatError(what + ": row " + std::to_string(i) + " has the wrong length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = parse_complex(row[static_cast<std::size_t>(c)], what);
  }
  return m;
}

ComplexVector parse_vector(const json& j, const std::string& what) {
  if (!j.is_array()) throw FormatError(what + ": expected a list of [re, im] pairs");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_complex(j[i], what);
  return v;
}

// ---------------------------------------------------------------------------
// MatrixFile

std::string format_matrix_file(const ComplexMatrix& m, const SystemShape& shape) {
  if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != shape.total()) {
    throw DimensionError("format_matrix_file: matrix side does not match dims " + shape.to_string());
  }
  std::string out = "{\"dims\":[";
  for (std::size_t s = 0; s < shape.size(); ++s) {
    if (s) out += ',';
    out += std::to_string(shape.dim(s));
  }
  out += "],\"matrix\":";
  append_matrix(out, m);
  out += "}\n";
  return out;
}

void write_matrix_file(std::ostream& out, const ComplexMatrix& m, const SystemShape& shape) {
  out << format_matrix_file(m, shape);
  if (!out) throw IoError("write_matrix_file: stream write failed");
}

void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& m, const SystemShape& shape) {
  write_text_file(path, format_matrix_file(m, shape));
}

MatrixFile parse_matrix_file(const std::string& text) {
  const json j = parse_json(text, "matrix file");
  const auto& dims_json = field(j, "dims", "matrix file");
  if (!dims_json.is_array() || dims_json.empty()) throw FormatError("matrix file: \"dims\" must be a non-empty list");
  std::vector<std::size_t> dims;
  for (const auto& d : dims_json) {
    if (!d.is_number_unsigned() || d.get<std::uint64_t>() == 0) {
      throw FormatError("matrix file: \"dims\" entries must be positive integers");
    }
    dims.push_back(static_cast<std::size_t>(d.get<std::uint64_t>()));
  }
  MatrixFile file;
  file.shape = SystemShape(std::move(dims));
  file.matrix = parse_matrix(field(j, "matrix", "matrix file"), "matrix file");
  if (file.matrix.rows() != file.matrix.cols() ||
      static_cast<std::size_t>(file.matrix.rows()) != file.shape.total()) {
    throw FormatError("matrix file: dimension mismatch: dims " + file.shape.to_string() + " give side " +
                      std::to_string(file.shape.total()) + " but the matrix is " +
                      std::to_string(file.matrix.rows()) + "x" + std::to_string(file.matrix.cols()));
  }
  return file;
}

MatrixFile read_matrix_file(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read_matrix_file: stream read failed");
  return parse_matrix_file(text);
}

MatrixFile read_matrix_file(const std::filesystem::path& path) { return parse_matrix_file(read_text_file(path)); }

// ---------------------------------------------------------------------------
// Canonical forms, ground truth, certificates

std::string format_canonical_file(const CanonicalForm& cf, const ComplexMatrix& gauge) {
  std::string out = "{\"n\":" + std::to_string(cf.n) + ",\"a\":";
  append_matrix(out, cf.a);
  out += ",\"b\":";
  append_matrix(out, cf.b);
  out += ",\"c\":";
  append_matrix(out, cf.c);
  out += ",\"d\":";
  append_matrix(out, cf.d);
  out += ",\"gauge\":";
  append_matrix(out, gauge);
  out += "}\n";
  return out;
}

CanonicalFile parse_canonical_file(const std::string& text) {
  const json j = parse_json(text, "canonical file");
  CanonicalFile file;
  const auto& n = field(j, "n", "canonical file");
  if (!n.is_number_unsigned()) throw FormatError("canonical file: \"n\" must be a positive integer");
  file.cf.n = n.get<std::size_t>();
  file.cf.a = parse_matrix(field(j, "a", "canonical file"), "canonical file a");
  file.cf.b = parse_matrix(field(j, "b", "canonical file"), "canonical file b");
  file.cf.c = parse_matrix(field(j, "c", "canonical file"), "canonical file c");
  file.cf.d = parse_matrix(field(j, "d", "canonical file"), "canonical file d");
  file.gauge = parse_matrix(field(j, "gauge", "canonical file"), "canonical file gauge");
  return file;
}

std::string format_ground_truth(const InstanceBundle& bundle) {
  if (!bundle.ground_truth) throw Error("format_ground_truth: bundle has no ground truth");
  const auto& gt = *bundle.ground_truth;
  std::string out = "{\"label\":\"";
  out += to_string(bundle.label);
  out += "\",\"seed\":" + std::to_string(bundle.seed) + ",\"n\":" + std::to_string(gt.cf.n) + ",\"a\":";
  append_matrix(out, gt.cf.a);
  out += ",\"b\":";
  append_matrix(out, gt.cf.b);
  out += ",\"c\":";
  append_matrix(out, gt.cf.c);
  out += ",\"d\":";
  append_matrix(out, gt.cf.d);
  out += ",\"disguise_ops\":[";
  for (std::size_t k = 0; k < gt.disguise_ops.size(); ++k) {
    if (k) out += ',';
    append_matrix(out, gt.disguise_ops[k]);
  }
  out += "]}\n";
  return out;
}

std::string format_certificate(const SeparabilityCertificate& cert) {
  std::string out = "{\"n\":" + std::to_string(cert.n) + ",\"seed\":" + std::to_string(cert.seed) +
                    ",\"tol\":" + format_number(cert.tol) + ",\"residual\":" + format_number(cert.residual) +
                    ",\"frame_trial\":" + std::to_string(cert.frame_trial) + ",\"local_ops\":[";
  for (std::size_t k = 0; k < cert.local_ops.size(); ++k) {
    if (k) out += ',';
    append_matrix(out, cert.local_ops[k]);
  }
  out += "],\"terms\":[";
  for (std::size_t k = 0; k < cert.decomposition.terms.size(); ++k) {
    const auto& t = cert.decomposition.terms[k];
    if (k) out += ',';
    out += "{\"psi\":";
    append_vector(out, t.psi);
    out += ",\"phi\":";
    append_vector(out, t.phi);
    out += ",\"omega\":";
    append_vector(out, t.omega);
    out += ",\"g\":";
    append_vector(out, t.g);
    out += '}';
  }
  out += "],\"ppt\":[";
  for (std::size_t k = 0; k < cert.ppt_report.checks.size(); ++k) {
    const auto& c = cert.ppt_report.checks[k];
    if (k) out += ',';
    out += "{\"subsystems\":\"" + c.label + "\",\"min_eigenvalue\":" + format_number(c.min_eigenvalue) + "}";
  }
  out += "]}\n";
  return out;
}

SeparabilityCertificate parse_certificate(const std::string& text) {
  const std::string what = "certificate";
  const json j = parse_json(text, what);
  SeparabilityCertificate cert;
  const auto& n = field(j, "n", what);
  const auto& seed = field(j, "seed", what);
  if (!n.is_number_unsigned() || !seed.is_number_unsigned()) {
    throw FormatError("certificate: \"n\" and \"seed\" must be non-negative integers");
  }
  cert.n = n.get<std::size_t>();
  cert.seed = seed.get<std::uint64_t>();
  cert.tol = parse_number(field(j, "tol", what), what);
  cert.residual = parse_number(field(j, "residual", what), what);
  if (j.contains("frame_trial") && j["frame_trial"].is_number_integer()) cert.frame_trial = j["frame_trial"].get<int>();

  const auto& ops = field(j, "local_ops", what);
  if (!ops.is_array() || ops.size() != 4) throw FormatError("certificate: \"local_ops\" must hold four matrices");
  for (std::size_t k = 0; k < 4; ++k) cert.local_ops[k] = parse_matrix(ops[k], what + " local_ops");

  const auto& terms = field(j, "terms", what);
  if (!terms.is_array()) throw FormatError("certificate: \"terms\" must be a list");
  for (const auto& t : terms) {
    cert.decomposition.terms.push_back({parse_vector(field(t, "psi", what), what),
                                        parse_vector(field(t, "phi", what), what),
                                        parse_vector(field(t, "omega", what), what),
                                        parse_vector(field(t, "g", what), what)});
  }
  if (j.contains("ppt") && j["ppt"].is_array()) {
    for (const auto& c : j["ppt"]) {
      BipartitionCheck check;
      check.label = field(c, "subsystems", what).get<std::string>();
      check.min_eigenvalue = parse_number(field(c, "min_eigenvalue", what), what);
      cert.ppt_report.checks.push_back(std::move(check));
    }
  }
  return cert;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace pptcanon
