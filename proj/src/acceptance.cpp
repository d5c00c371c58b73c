#include "pptcanon/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "pptcanon/canonical.hpp"
#include "pptcanon/instances.hpp"
#include "pptcanon/matrix_io.hpp"
#include "pptcanon/oracles.hpp"
#include "pptcanon/separability.hpp"
#include "pptcanon/spectral.hpp"
#include "pptcanon/tensor_core.hpp"

namespace pptcanon {

namespace {

// Tolerances, one per criterion.
constexpr double kRoundTripTol = 1e-8;        // 1
constexpr double kPptTol = 1e-10;             // 2
constexpr double kKernelTol = 1e-10;          // 3
constexpr double kOracleTol = 1e-8;           // 4
constexpr double kCertifyTol = 1e-7;          // 5
constexpr double kThresholdWidth = 1e-3;      // 6
constexpr double kSpectralTol = 1e-8;         // 7
constexpr double kProjectionTol = 1e-9;       // 8
constexpr double kRoundTripSeconds = 30.0;    // 1
constexpr double kQuickSuiteSeconds = 10.0;   // 9

struct SuiteInstance {
  InstanceBundle bundle;
  DMode mode;
};

std::string fmt(double x) {
  std::ostringstream out;
  out << std::setprecision(3) << std::scientific << x;
  return out.str();
}

std::vector<SuiteInstance> canonical_suite(const AcceptanceOptions& opt) {
  std::vector<SuiteInstance> suite;
  for (std::size_t n = 1; n <= opt.max_n; ++n) {
    for (DMode mode : {DMode::kIdentity, DMode::kRandomPd}) {
      for (int i = 0; i < opt.instances_per_mode; ++i) {
        const std::uint64_t seed = (mode == DMode::kIdentity ? 0u : 1'000'000u) + 1000u * n + static_cast<unsigned>(i);
        InstanceOptions io;
        io.d_mode = mode;
        suite.push_back({random_instance(n, seed, io), mode});
      }
    }
  }
  return suite;
}

CriterionResult timed(int id, std::string name, const std::function<void(CriterionResult&)>& body) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  const auto start = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

CriterionResult canonical_round_trip(const AcceptanceOptions& opt) {
  return timed(1, "Canonical form round trip", [&](CriterionResult& r) {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    std::size_t count = 0;
    for (const auto& inst : canonical_suite(opt)) {
      const auto& truth = inst.bundle.ground_truth->cf;
      const auto ex = extract_canonical(inst.bundle.rho, truth.n);
      for (auto [got, want] : {std::pair{&ex.cf.a, &truth.a}, {&ex.cf.b, &truth.b}, {&ex.cf.c, &truth.c},
                               {&ex.cf.d, &truth.d}}) {
        worst = std::max(worst, max_entry_error(*got, *want));
      }
      ++count;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.pass = worst <= kRoundTripTol && seconds < kRoundTripSeconds;
    r.detail = std::to_string(count) + " instances, max entry error " + fmt(worst) + " (tol " + fmt(kRoundTripTol) +
               "), " + fmt(seconds) + " s (limit " + fmt(kRoundTripSeconds) + " s)";
  });
}

CriterionResult canonical_consistency(const AcceptanceOptions& opt) {
  return timed(2, "Canonical state consistency (PPT, rank N, kernel 7N)", [&](CriterionResult& r) {
    double worst_ratio = 0.0;  // min eigenvalue / ||rho||_F, most negative
    std::size_t failures = 0;
    std::size_t count = 0;
    for (const auto& inst : canonical_suite(opt)) {
      const auto& rho = inst.bundle.rho;
      const std::size_t n = inst.bundle.ground_truth->cf.n;
      const auto ppt = is_ppt(rho, inst.bundle.shape, kPptTol);
      worst_ratio = std::min(worst_ratio, ppt.worst().min_eigenvalue / rho.norm());
      const auto rk = rank_kernel(rho);
      const bool ok = ppt.ppt && ppt.checks.size() == 7 && rk.rank == n && rk.kernel_basis.size() == 7 * n;
      failures += ok ? 0 : 1;
      ++count;
    }
    r.pass = failures == 0;
    r.detail = std::to_string(count) + " instances, " + std::to_string(failures) +
               " failures, worst min eigenvalue / ||rho||_F = " + fmt(worst_ratio) + " (floor -" + fmt(kPptTol) + ")";
  });
}

CriterionResult kernel_families(const AcceptanceOptions& opt) {
  return timed(3, "Kernel families", [&](CriterionResult& r) {
    double worst = 0.0;
    std::size_t failures = 0;
    for (const auto& inst : canonical_suite(opt)) {
      const auto rep = verify_kernel_family(inst.bundle.rho, inst.bundle.ground_truth->cf, kKernelTol);
      worst = std::max(worst, rep.max_residual);
      failures += rep.pass ? 0 : 1;
    }
    r.pass = failures == 0 && worst <= kKernelTol;
    r.detail = "max residual " + fmt(worst) + " (tol " + fmt(kKernelTol) + "), " + std::to_string(failures) +
               " failures";
  });
}

CriterionResult decomposition_oracle(const AcceptanceOptions& opt) {
  return timed(4, "Product decomposition oracle equivalence", [&](CriterionResult& r) {
    double worst = 0.0;
    for (const auto& inst : canonical_suite(opt)) {
      const auto& cf = inst.bundle.ground_truth->cf;
      const auto pd = decompose_canonical(cf, kDefaultTol, inst.bundle.seed);
      if (pd.terms.size() != cf.n) throw Error("decomposition has the wrong number of terms");
      worst = std::max(worst, relative_frobenius_error(reconstruct_decomposition(pd, cf.n), build_canonical_222n(cf)));
    }
    r.pass = worst <= kOracleTol;
    r.detail = "max relative Frobenius error " + fmt(worst) + " (tol " + fmt(kOracleTol) + ")";
  });
}

CriterionResult disguised_end_to_end(const AcceptanceOptions& opt) {
  return timed(5, "End-to-end with disguise", [&](CriterionResult& r) {
    double worst = 0.0;
    std::size_t failures = 0;
    std::size_t count = 0;
    std::string first_failure;
    for (std::size_t n = 1; n <= opt.max_n; ++n) {
      for (int i = 0; i < opt.disguised_per_n; ++i) {
        const std::uint64_t seed = 2'000'000u + 1000u * n + static_cast<unsigned>(i);
        InstanceOptions io;
        io.d_mode = i % 2 == 0 ? DMode::kRandomPd : DMode::kIdentity;
        io.disguise = true;
        const auto bundle = random_instance(n, seed, io);
        const auto outcome = certify_separability(bundle.rho, n, kCertifyTol, kDefaultSearchBudget, seed);
        ++count;
        if (outcome.status != CertifyOutcome::Status::kCertified) {
          ++failures;
          if (first_failure.empty()) first_failure = "seed " + std::to_string(seed) + ": " + outcome.diagnostic;
          continue;
        }
        const auto& cert = *outcome.certificate;
        const double pullback =
            relative_frobenius_error(reconstruct_decomposition(cert.decomposition, n), bundle.rho);
        worst = std::max({worst, cert.residual, pullback});
        if (cert.decomposition.terms.size() > n || pullback > kCertifyTol) ++failures;
      }
    }
    r.pass = failures == 0 && worst <= kCertifyTol;
    r.detail = std::to_string(count) + " disguised instances, max residual " + fmt(worst) + " (tol " +
               fmt(kCertifyTol) + "), " + std::to_string(failures) + " failures";
    if (!first_failure.empty()) r.detail += "; first: " + first_failure;
  });
}

CriterionResult peres_gate() {
  return timed(6, "Peres gate", [&](CriterionResult& r) {
    const auto control = ghz_werner_control(0.9, 2);
    const auto outcome = certify_separability(control.rho, 2);
    const bool rejected = outcome.status == CertifyOutcome::Status::kNotPpt;

    const SystemShape three{2, 2, 2};
    const bool mixed_ppt = is_ppt(ghz_werner(0.0), three).ppt;
    const auto fails = [&](double p) { return !is_ppt(ghz_werner(p), three).ppt; };
    const bool endpoints = !fails(0.0) && fails(1.0);
    const auto [lo, hi] = oracles::bisect_threshold(fails, 0.0, 1.0, kThresholdWidth);

    r.pass = rejected && mixed_ppt && endpoints && hi - lo <= kThresholdWidth;
    std::ostringstream d;
    d << "ghz_werner(0.9) x |0><0|: " << to_string(outcome.status) << "; ghz_werner(0): "
      << (mixed_ppt ? "PPT" : "NPT") << "; PPT threshold p* in [" << std::setprecision(6) << lo << ", " << hi << "]";
    r.detail = d.str();
  });
}

CriterionResult spectral_suite(const AcceptanceOptions& opt) {
  return timed(7, "Spectral unit suite", [&](CriterionResult& r) {
    Rng rng(7'000'000);
    double eig_err = 0.0;
    const int trials = opt.quick ? 50 : 200;
    for (int t = 0; t < trials; ++t) {
      for (Eigen::Index side : {2, 3}) {
        ComplexMatrix g(side, side);
        for (Eigen::Index j = 0; j < side; ++j) {
          for (Eigen::Index i = 0; i < side; ++i) g(i, j) = rng.complex_normal();
        }
        const ComplexMatrix h = hermitian_part(g);
        const auto eig = hermitian_eig(h);
        if (side == 2) {
          const auto ref = oracles::eigenvalues_2x2(h);
          for (int k = 0; k < 2; ++k) eig_err = std::max(eig_err, std::abs(eig.eigenvalues(k) - ref[k]));
        } else {
          const auto ref = oracles::eigenvalues_3x3(h);
          for (int k = 0; k < 3; ++k) eig_err = std::max(eig_err, std::abs(eig.eigenvalues(k) - ref[k]));
        }
      }
    }

    double joint_err = 0.0;
    for (std::size_t n = 1; n <= opt.max_n; ++n) {
      for (int i = 0; i < 10; ++i) {
        const auto fam = random_commuting_family(n, 7'100'000u + 100u * n + static_cast<unsigned>(i));
        const auto joint = simultaneous_diagonalize({fam.a, fam.b, fam.c}, kDefaultTol, static_cast<unsigned>(i));
        std::vector<bool> used(n, false);
        for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(n); ++k) {
          double best = 1e300;
          Eigen::Index best_m = 0;
          for (Eigen::Index m = 0; m < static_cast<Eigen::Index>(n); ++m) {
            const double dist = std::max({std::abs(joint.eigenvalue_lists[0](k) - fam.a_eigenvalues(m)),
                                          std::abs(joint.eigenvalue_lists[1](k) - fam.b_eigenvalues(m)),
                                          std::abs(joint.eigenvalue_lists[2](k) - fam.c_eigenvalues(m))});
            if (dist < best) {
              best = dist;
              best_m = m;
            }
          }
          if (used[static_cast<std::size_t>(best_m)]) best = 1e300;
          used[static_cast<std::size_t>(best_m)] = true;
          joint_err = std::max(joint_err, best);
        }
      }
    }

    ComplexMatrix x(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    z << 1, 0, 0, -1;
    bool rejected = false;
    try {
      simultaneous_diagonalize({x, z});
    } catch (const CommutationError&) {
      rejected = true;
    }

    double sqrt_err = 0.0;
    for (std::size_t n = 1; n <= opt.max_n; ++n) {
      ComplexMatrix g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      for (Eigen::Index j = 0; j < g.cols(); ++j) {
        for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.complex_normal();
      }
      const ComplexMatrix d = hermitian_part(g.adjoint() * g);
      const ComplexMatrix root = sqrt_psd(d);
      sqrt_err = std::max(sqrt_err, relative_frobenius_error(root * root, d));
    }

    r.pass = eig_err <= kSpectralTol && joint_err <= kSpectralTol && rejected && sqrt_err <= kSpectralTol;
    r.detail = "closed-form eigenvalue error " + fmt(eig_err) + ", joint spectrum error " + fmt(joint_err) +
               ", [X,Z] " + (rejected ? "rejected" : "ACCEPTED") + ", sqrt_psd error " + fmt(sqrt_err) + " (tol " +
               fmt(kSpectralTol) + ")";
  });
}

CriterionResult projection_consistency(const AcceptanceOptions& opt) {
  return timed(8, "Projection consistency (2x2x2xN -> 2x2xN)", [&](CriterionResult& r) {
    double worst = 0.0;
    const ComplexVector one = basis_vector(2, 1);
    for (const auto& inst : canonical_suite(opt)) {
      const std::size_t n = inst.bundle.ground_truth->cf.n;
      const auto ex = extract_canonical(inst.bundle.rho, n);
      const ComplexMatrix projected = partial_projection(ex.gauged_state, shape_222n(n), 0, one);
      worst = std::max(worst, max_entry_error(projected, build_canonical_22n(ex.cf.a, ex.cf.b)));
    }
    r.pass = worst <= kProjectionTol;
    r.detail = "max entry error " + fmt(worst) + " (tol " + fmt(kProjectionTol) + ")";
  });
}

bool bitwise_equal(const ComplexMatrix& x, const ComplexMatrix& y) {
  return x.rows() == y.rows() && x.cols() == y.cols() &&
         std::memcmp(x.data(), y.data(), sizeof(Complex) * static_cast<std::size_t>(x.size())) == 0;
}

CriterionResult serialization(const AcceptanceOptions& opt) {
  return timed(9, "Serialization and quick selftest", [&](CriterionResult& r) {
    Rng rng(9'000'000);
    std::size_t mismatches = 0;
    const std::vector<std::vector<std::size_t>> shapes{{2}, {3}, {2, 2}, {2, 3}, {2, 2, 2}, {2, 2, 2, 2}, {2, 2, 2, 3}};
    for (int t = 0; t < 100; ++t) {
      const SystemShape shape(shapes[static_cast<std::size_t>(t) % shapes.size()]);
      const auto side = static_cast<Eigen::Index>(shape.total());
      ComplexMatrix m(side, side);
      for (Eigen::Index j = 0; j < side; ++j) {
        for (Eigen::Index i = 0; i < side; ++i) {
          // Spread magnitudes over most of the double exponent range.
          const double scale = std::pow(10.0, rng.uniform(-300.0, 300.0) * (t % 3 == 0 ? 1.0 : 0.01));
          m(i, j) = Complex(rng.normal() * scale, rng.normal() * scale);
        }
      }
      const auto file = parse_matrix_file(format_matrix_file(m, shape));
      if (!(file.shape == shape) || !bitwise_equal(file.matrix, m)) ++mismatches;
    }
    r.pass = mismatches == 0;
    r.detail = "100 random matrices, " + std::to_string(mismatches) + " bitwise mismatches";

    if (!opt.quick) {
      const auto start = std::chrono::steady_clock::now();
      const auto quick = run_acceptance(quick_acceptance_options());
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const bool ok = all_passed(quick) && seconds < kQuickSuiteSeconds;
      r.pass = r.pass && ok;
      r.detail += "; quick suite " + std::string(all_passed(quick) ? "passed" : "FAILED") + " in " + fmt(seconds) +
                  " s (limit " + fmt(kQuickSuiteSeconds) + " s)";
    }
  });
}

}  // namespace

AcceptanceOptions quick_acceptance_options() {
  AcceptanceOptions opt;
  opt.quick = true;
  opt.max_n = 3;
  opt.instances_per_mode = 10;
  opt.disguised_per_n = 4;
  return opt;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  std::vector<CriterionResult> results;
  results.push_back(canonical_round_trip(options));
  results.push_back(canonical_consistency(options));
  results.push_back(kernel_families(options));
  results.push_back(decomposition_oracle(options));
  results.push_back(disguised_end_to_end(options));
  results.push_back(peres_gate());
  results.push_back(spectral_suite(options));
  results.push_back(projection_consistency(options));
  results.push_back(serialization(options));
  return results;
}

void print_acceptance_table(std::ostream& out, const std::vector<CriterionResult>& results) {
  for (const auto& r : results) {
    out << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.name << " (" << std::fixed << std::setprecision(2)
        << r.seconds << " s): " << r.detail << '\n';
  }
  const auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.pass; });
  out << passed << "/" << results.size() << " criteria passed\n";
  out.unsetf(std::ios::floatfield);
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
}

}  // namespace pptcanon
