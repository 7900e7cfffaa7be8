#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace midlayer {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double ms = 0.0;
};

struct VerifyOptions {
  bool full = false;   // include the d=4 sweep-backed checks
  int shards = 0;      // 0 = hardware default
  uint64_t samples = 100'000;
  uint64_t seed = 42;
  std::ostream* progress = nullptr;  // one line per finished check when set
};

/// Named acceptance criteria. Criterion 5 carries the heavy d=4 sweep when
/// `include_d4` is set; everything else is desk-fast.
std::vector<CheckResult> run_acceptance(const VerifyOptions& opt);

/// Module invariants beyond the acceptance list (property-style checks).
std::vector<CheckResult> run_invariants(const VerifyOptions& opt);

/// fast: invariants + acceptance without d=4. all: everything.
std::vector<CheckResult> run_verify(const VerifyOptions& opt);

}  // namespace midlayer
