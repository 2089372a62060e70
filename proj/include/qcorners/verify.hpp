#pragma once

#include <string>
#include <vector>

namespace qcorners {

enum class VerifyLevel { fast, full };

struct SuiteResult {
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

struct VerifySummary {
  std::vector<SuiteResult> suites;
  bool passed() const;
};

/// Runs the built-in invariant suites. `fast` covers group axioms, degree
/// sums, corner/simplex/naive count equality and small box-norm oracles;
/// `full` adds the sl2:7 mean-ergodic trials, the complete n <= 6, k <= 3
/// box-norm cross-check and a weak regularity run.
VerifySummary verify_suite(VerifyLevel level);

}  // namespace qcorners
