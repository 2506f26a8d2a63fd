#pragma once

#include <string>
#include <vector>

namespace epk {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Run the bench checks whose name contains `only_filter` (all when empty).
/// Each check is self-contained and returns pass/fail plus a short report.
std::vector<CheckResult> run_verification(const std::string& only_filter = "");

}  // namespace epk
