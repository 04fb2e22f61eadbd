#pragma once

#include <string>
#include <vector>

namespace spie::harness {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double time_limit = 0.0;  // seconds; 0 when the check has none
};

// The acceptance suite, ids 1..11. A check with a time limit fails when it
// runs over, whatever its numbers say.
CheckResult check_reciprocity();
CheckResult check_td_convergence();
CheckResult check_fr_dominance();
CheckResult check_srr_laws();
CheckResult check_riverswim();
CheckResult check_sixarms();
CheckResult check_coverage_ordering();
CheckResult check_frozen_ablation();
CheckResult check_reduction();
CheckResult check_nmrdp();
CheckResult check_mountaincar();

inline constexpr int kCheckCount = 11;
CheckResult run_check(int id);

// "[PASS] 5 RiverSwim ... (12.3 s)" style line.
std::string format_check(const CheckResult& result);

}  // namespace spie::harness
