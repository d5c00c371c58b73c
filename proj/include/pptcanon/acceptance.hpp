#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace pptcanon {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// Quick mode: N <= 3, fewer instances, and no nested timing run.
  bool quick = false;
  std::size_t max_n = 6;
  int instances_per_mode = 50;
  int disguised_per_n = 10;
};

AcceptanceOptions quick_acceptance_options();

/// Runs the seeded acceptance criteria and returns one result per criterion.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// "[PASS] 1 name (1.23 s): detail" lines plus a summary line.
void print_acceptance_table(std::ostream& out, const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace pptcanon
