#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace iag {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

/// Runs the full certification suite: every convergence bound, identity and
/// oracle is exercised on seeded desk-scale instances at its pinned tolerance.
/// Prints one PASS/FAIL line per criterion plus a total; the wall-time budget
/// is itself a criterion.
std::vector<CriterionResult> run_certification_suite(std::ostream& out);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace iag
