// Acceptance suite: one line per bench criterion, nonzero exit on any failure.

#include <cstdio>

#include "epkit/verify.hpp"

int main() {
  const auto results = epk::run_verification("");
  bool all_pass = true;
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    std::printf("%s %s (%.2f s)%s%s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                r.detail.empty() ? "" : " — ", r.detail.c_str());
  }
  std::printf("%s\n", all_pass ? "acceptance: all criteria passed"
                               : "acceptance: at least one criterion FAILED");
  return all_pass ? 0 : 1;
}
