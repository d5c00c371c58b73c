#include "pptcanon/matrix_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <sstream>

#include "pptcanon/separability.hpp"
#include "pptcanon/spectral.hpp"
#include "test_support.hpp"

namespace pptcanon {
namespace {

bool bitwise_equal(const ComplexMatrix& x, const ComplexMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
  return std::memcmp(x.data(), y.data(), sizeof(Complex) * static_cast<std::size_t>(x.size())) == 0;
}

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(-2.5), "-2.5");
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-0.0), "-0.0");
  EXPECT_EQ(format_number(1e-300), "1e-300");
  EXPECT_THROW(format_number(std::numeric_limits<double>::quiet_NaN()), FormatError);
  EXPECT_THROW(format_number(std::numeric_limits<double>::infinity()), FormatError);
}

TEST(MatrixFile, IdentityTextIsExact) {
  std::ostringstream out;
  write_matrix_file(out, ComplexMatrix::Identity(2, 2), SystemShape{2});
  EXPECT_EQ(out.str(), "{\"dims\":[2],\"matrix\":[[[1,0],[0,0]],[[0,0],[1,0]]]}\n");
}

TEST(MatrixFile, BitwiseRoundTrip) {
  Rng rng(71);
  for (int t = 0; t < 50; ++t) {
    ComplexMatrix m = testing::random_matrix(8, 8, rng);
    // Spread magnitudes across many binades, plus signed zeros and subnormals.
    for (Eigen::Index k = 0; k < m.size(); ++k) {
      const double e = std::ldexp(1.0, static_cast<int>(rng.uniform(-1000.0, 1000.0)));
      m.data()[k] *= e;
    }
    m(0, 0) = Complex(-0.0, 0.0);
    m(0, 1) = Complex(std::numeric_limits<double>::denorm_min(), -std::numeric_limits<double>::max());
    std::ostringstream out;
    write_matrix_file(out, m, SystemShape{2, 2, 2});
    std::istringstream in(out.str());
    const auto file = read_matrix_file(in);
    EXPECT_TRUE(bitwise_equal(file.matrix, m)) << "case " << t;
    EXPECT_EQ(file.shape, (SystemShape{2, 2, 2}));
    EXPECT_TRUE(std::signbit(file.matrix(0, 0).real()));
  }
}

TEST(MatrixFile, Errors) {
  EXPECT_THROW(parse_matrix_file("{\"dims\":[2,2,2],\"matrix\":[[[1,0]]]}"), FormatError);
  EXPECT_THROW(parse_matrix_file("{\"dims\":[2],\"matrix\":[[[1,0],[0,0]],[[0,0],[1]]]}"), FormatError);
  EXPECT_THROW(parse_matrix_file("{\"dims\":[2],\"matrix\":[[[1,0],[0,0]],[[0,0],[1,0]]]"), FormatError);
  EXPECT_THROW(parse_matrix_file("{\"dims\":[0],\"matrix\":[]}"), FormatError);
  EXPECT_THROW(parse_matrix_file("{\"matrix\":[[[1,0]]]}"), FormatError);
  EXPECT_THROW(parse_matrix_file("{\"dims\":[1],\"matrix\":[[[1e999,0]]]}"), FormatError);
  EXPECT_THROW(parse_matrix_file("{\"dims\":[1],\"matrix\":[[[\"1\",0]]]}"), FormatError);
  EXPECT_THROW(format_matrix_file(ComplexMatrix::Identity(3, 3), SystemShape{2}), DimensionError);
}

TEST(TextFiles, MissingFileIsIoError) {
  const auto path = std::filesystem::temp_directory_path() / "pptcanon-does-not-exist" / "x.json";
  EXPECT_THROW(read_text_file(path), IoError);
  EXPECT_THROW(read_matrix_file(path), IoError);
  EXPECT_THROW(write_text_file(path, "x"), IoError);
}

TEST(CanonicalFile, RoundTrip) {
  const auto cf = testing::random_form(3, 17, DMode::kRandomPd);
  const ComplexMatrix gauge = sqrt_psd(cf.d, kDefaultTol, true);
  const auto parsed = parse_canonical_file(format_canonical_file(cf, gauge));
  EXPECT_EQ(parsed.cf.n, 3u);
  EXPECT_TRUE(bitwise_equal(parsed.cf.a, cf.a));
  EXPECT_TRUE(bitwise_equal(parsed.cf.b, cf.b));
  EXPECT_TRUE(bitwise_equal(parsed.cf.c, cf.c));
  EXPECT_TRUE(bitwise_equal(parsed.cf.d, cf.d));
  EXPECT_TRUE(bitwise_equal(parsed.gauge, gauge));
}

TEST(Certificate, RoundTrip) {
  InstanceOptions options;
  options.disguise = true;
  const auto bundle = random_instance(2, 5, options);
  const auto outcome = certify_separability(bundle.rho, 2);
  ASSERT_TRUE(outcome.certificate.has_value());
  const auto& cert = *outcome.certificate;
  const auto parsed = parse_certificate(format_certificate(cert));
  EXPECT_EQ(parsed.n, cert.n);
  EXPECT_EQ(parsed.seed, cert.seed);
  EXPECT_EQ(parsed.tol, cert.tol);
  EXPECT_EQ(parsed.residual, cert.residual);
  EXPECT_EQ(parsed.frame_trial, cert.frame_trial);
  ASSERT_EQ(parsed.decomposition.terms.size(), cert.decomposition.terms.size());
  for (std::size_t k = 0; k < cert.decomposition.terms.size(); ++k) {
    EXPECT_EQ(parsed.decomposition.terms[k].psi, cert.decomposition.terms[k].psi);
    EXPECT_EQ(parsed.decomposition.terms[k].g, cert.decomposition.terms[k].g);
  }
  for (std::size_t k = 0; k < 4; ++k) EXPECT_TRUE(bitwise_equal(parsed.local_ops[k], cert.local_ops[k]));
  EXPECT_EQ(reconstruct_decomposition(parsed.decomposition, 2), reconstruct_decomposition(cert.decomposition, 2));
}

TEST(GroundTruth, ContainsTheGeneratingMatrices) {
  const auto bundle = random_instance(2, 1);
  const auto j = nlohmann::json::parse(format_ground_truth(bundle));
  EXPECT_EQ(j.at("n"), 2);
  EXPECT_EQ(j.at("seed"), 1);
  EXPECT_TRUE(bitwise_equal(parse_matrix(j.at("a"), "a"), bundle.ground_truth->cf.a));
}

}  // namespace
}  // namespace pptcanon
