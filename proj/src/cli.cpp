#include "pptcanon/cli.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "pptcanon/acceptance.hpp"
#include "pptcanon/canonical.hpp"
#include "pptcanon/instances.hpp"
#include "pptcanon/matrix_io.hpp"
#include "pptcanon/separability.hpp"
#include "pptcanon/tensor_core.hpp"

namespace pptcanon::cli {

namespace {

std::string sci(double x) {
  std::ostringstream out;
  out << std::setprecision(6) << std::scientific << x;
  return out.str();
}

struct GenArgs {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  bool disguise = false;
  std::string d_mode = "identity";
  double scale = 1.0;
  std::optional<double> ghz_werner;
  std::string output;
};

struct CheckArgs {
  std::string input;
  double tol = kDefaultTol;
};

struct CanonizeArgs {
  std::string input;
  std::size_t n = 0;
  double tol = kDefaultTol;
  std::string output;
};

struct DecomposeArgs {
  std::string input;
  std::size_t n = 0;
  double tol = kDefaultCertifyTol;
  int budget = kDefaultSearchBudget;
  std::uint64_t seed = 0;
  std::string output;
};

struct VerifyArgs {
  std::string input;
  std::string certificate;
  double tol = kDefaultCertifyTol;
};

MatrixFile read_state(const std::string& path, std::size_t n) {
  MatrixFile file = read_matrix_file(path);
  if (n != 0 && file.shape.total() != 8 * n) {
    throw FormatError(path + ": dims " + file.shape.to_string() + " do not describe a 2x2x2x" + std::to_string(n) +
                      " state");
  }
  return file;
}

int cmd_gen(const GenArgs& args, std::ostream& out) {
  if (args.ghz_werner) {
    InstanceBundle bundle;
    if (args.n == 0) {
      bundle.rho = ghz_werner(*args.ghz_werner);
      bundle.shape = SystemShape{2, 2, 2};
    } else {
      bundle = ghz_werner_control(*args.ghz_werner, args.n);
    }
    write_matrix_file(args.output, bundle.rho, bundle.shape);
    out << "wrote " << args.output << " (ghz_werner p=" << *args.ghz_werner << ", dims " << bundle.shape.to_string()
        << ")\n";
    return kOk;
  }
  if (args.n == 0) throw CLI::ValidationError("--n", "required unless --ghz-werner is given");
  InstanceOptions options;
  options.d_mode = args.d_mode == "random" ? DMode::kRandomPd : DMode::kIdentity;
  options.disguise = args.disguise;
  options.scale = args.scale;
  const auto bundle = random_instance(args.n, args.seed, options);
  write_matrix_file(args.output, bundle.rho, bundle.shape);
  const std::string truth_path = args.output + ".truth";
  write_text_file(truth_path, format_ground_truth(bundle));
  out << "wrote " << args.output << " and " << truth_path << " (" << to_string(bundle.label) << ", dims "
      << bundle.shape.to_string() << ", seed " << args.seed << ", d " << to_string(options.d_mode) << ")\n";
  return kOk;
}

int cmd_check(const CheckArgs& args, std::ostream& out, std::ostream& err) {
  const auto file = read_state(args.input, 0);
  const auto psd = psd_check(file.matrix, args.tol);
  if (!psd.is_psd) {
    err << "invalid state: hermitian=" << (psd.is_hermitian ? "yes" : "no") << ", min eigenvalue "
        << sci(psd.min_eigenvalue) << '\n';
    return kDataError;
  }
  const auto ppt = is_ppt(file.matrix, file.shape, args.tol);
  const std::size_t rank = hermitian_rank(hermitian_part(file.matrix), args.tol);
  out << (ppt.ppt ? "PPT" : "NPT") << " dims=" << file.shape.to_string() << " hermitian=yes rank=" << rank;
  for (const auto& c : ppt.checks) out << " min_eig[" << c.label << "]=" << sci(c.min_eigenvalue);
  out << '\n';
  return ppt.ppt ? kOk : kNotPpt;
}

int cmd_canonize(const CanonizeArgs& args, std::ostream& out, std::ostream& err) {
  const auto file = read_state(args.input, args.n);
  try {
    const auto ex = extract_canonical(file.matrix, args.n, args.tol);
    write_text_file(args.output, format_canonical_file(ex.cf, ex.gauge));
    out << "canonical form extracted: n=" << args.n << " max_block_residual=" << sci(ex.max_block_residual)
        << " wrote " << args.output << '\n';
    return kOk;
  } catch (const ExtractionError& e) {
    if (e.kind() == ExtractionError::Kind::kInvalidState) {
      err << e.what() << '\n';
      return kDataError;
    }
    err << to_string(e.kind()) << ": " << e.what() << '\n';
    return kHypothesisNotMet;
  }
}

int cmd_decompose(const DecomposeArgs& args, std::ostream& out, std::ostream& err) {
  const auto file = read_state(args.input, args.n);
  const auto psd = psd_check(file.matrix, args.tol);
  if (!psd.is_psd) {
    err << "invalid state: min eigenvalue " << sci(psd.min_eigenvalue) << '\n';
    return kDataError;
  }
  const auto outcome = certify_separability(file.matrix, args.n, args.tol, args.budget, args.seed);
  switch (outcome.status) {
    case CertifyOutcome::Status::kCertified: {
      const auto& cert = *outcome.certificate;
      write_text_file(args.output, format_certificate(cert));
      out << "certified: residual=" << sci(cert.residual) << " terms=" << cert.decomposition.terms.size()
          << " frame_trial=" << cert.frame_trial << " wrote " << args.output << '\n';
      return kOk;
    }
    case CertifyOutcome::Status::kNotPpt:
      out << "NotPPT: " << outcome.diagnostic << '\n';
      return kNotPpt;
    case CertifyOutcome::Status::kHypothesisNotMet:
      out << "HypothesisNotMet: " << outcome.diagnostic << '\n';
      return kHypothesisNotMet;
  }
  return kFailed;
}

int cmd_verify(const VerifyArgs& args, std::ostream& out) {
  const auto file = read_matrix_file(args.input);
  const auto cert = parse_certificate(read_text_file(args.certificate));
  if (cert.n == 0 || file.shape.total() != 8 * cert.n) {
    throw FormatError("certificate n=" + std::to_string(cert.n) + " does not match dims " + file.shape.to_string());
  }
  const double residual = relative_frobenius_error(reconstruct_decomposition(cert.decomposition, cert.n),
                                                   hermitian_part(file.matrix));
  const bool ok = residual <= args.tol && cert.decomposition.terms.size() <= cert.n;
  out << (ok ? "OK" : "REJECTED") << ": residual=" << sci(residual) << " tol=" << sci(args.tol)
      << " terms=" << cert.decomposition.terms.size() << '\n';
  return ok ? kOk : kFailed;
}

int cmd_selftest(bool quick, std::ostream& out) {
  const auto results = run_acceptance(quick ? quick_acceptance_options() : AcceptanceOptions{});
  print_acceptance_table(out, results);
  return all_passed(results) ? kOk : kFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Canonical forms and separability certificates for rank-N PPT states on 2x2x2xN", "pptcanon"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a seeded instance");
  gen_cmd->add_option("--n", gen.n, "Dimension of the fourth subsystem")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_flag("--disguise", gen.disguise, "Conjugate by random local invertible operators");
  gen_cmd->add_option("--d-mode", gen.d_mode, "identity | random")->check(CLI::IsMember({"identity", "random"}));
  gen_cmd->add_option("--scale", gen.scale, "Eigenvalue radius of A, B, C")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--ghz-werner", gen.ghz_werner, "Write the GHZ-Werner state with this p instead")
      ->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("-o,--output", gen.output, "Output matrix file")->required();

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Hermiticity, rank and partial-transpose spectra");
  check_cmd->add_option("-i,--input", check.input, "Input matrix file")->required();
  check_cmd->add_option("--tol", check.tol, "Relative tolerance")->check(CLI::PositiveNumber);

  CanonizeArgs canon;
  auto* canon_cmd = app.add_subcommand("canonize", "Extract the canonical form (A, B, C, D)");
  canon_cmd->add_option("-i,--input", canon.input, "Input matrix file")->required();
  canon_cmd->add_option("--n", canon.n, "Dimension of the fourth subsystem")->required()->check(CLI::PositiveNumber);
  canon_cmd->add_option("--tol", canon.tol, "Relative tolerance")->check(CLI::PositiveNumber);
  canon_cmd->add_option("-o,--output", canon.output, "Output canonical-form file")->required();

  DecomposeArgs dec;
  auto* dec_cmd = app.add_subcommand("decompose", "Certify separability with an explicit product decomposition");
  dec_cmd->add_option("-i,--input", dec.input, "Input matrix file")->required();
  dec_cmd->add_option("--n", dec.n, "Dimension of the fourth subsystem")->required()->check(CLI::PositiveNumber);
  dec_cmd->add_option("--tol", dec.tol, "Certification tolerance")->check(CLI::PositiveNumber);
  dec_cmd->add_option("--budget", dec.budget, "Random frame trials")->check(CLI::PositiveNumber);
  dec_cmd->add_option("--seed", dec.seed, "Seed for the frame search and joint diagonalization");
  dec_cmd->add_option("-o,--output", dec.output, "Output certificate file")->required();

  VerifyArgs ver;
  auto* ver_cmd = app.add_subcommand("verify", "Recompute a certificate's reconstruction residual");
  ver_cmd->add_option("-i,--input", ver.input, "Input matrix file")->required();
  ver_cmd->add_option("-c,--certificate", ver.certificate, "Certificate file")->required();
  ver_cmd->add_option("--tol", ver.tol, "Accepted residual")->check(CLI::PositiveNumber);

  bool quick = false;
  auto* self_cmd = app.add_subcommand("selftest", "Run the seeded acceptance suite");
  self_cmd->add_flag("--quick", quick, "N <= 3 and fewer instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*check_cmd) return cmd_check(check, out, err);
    if (*canon_cmd) return cmd_canonize(canon, out, err);
    if (*dec_cmd) return cmd_decompose(dec, out, err);
    if (*ver_cmd) return cmd_verify(ver, out);
    if (*self_cmd) return cmd_selftest(quick, out);
  } catch (const CLI::ValidationError& e) {
    err << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const InvalidArgumentError& e) {
    err << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}

}  // namespace pptcanon::cli
