#pragma once

#include <string>
#include <vector>

#include "twistrank/curve.hpp"

namespace twistrank {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // first counterexample or a skip note
};

struct VerifyScales {
  long long series_box = 40;     // box for series identities
  long long psi_box = 40;        // enumeration / lifting checks
  long long omega_dmax = 40;     // exhaustive Omega comparison
  long long lattice_B = 20;      // reduction brute force, q monotonicity
  long long partition_tmax = 8;  // triple-partition levels
  long long partition_box = 30;
  long long annulus_B = 40;      // containment range for annulus constants
  int rng_draws = 50000;
  unsigned threads = 0;
};

// Every module's paper-derived invariants at the configured scales. Checks
// never throw; failures carry the first counterexample.
std::vector<CheckResult> run_all_checks(const Curve& curve, const VerifyScales& scales = {});

bool all_pass(const std::vector<CheckResult>& checks);

}  // namespace twistrank
