#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "korodisc/report.hpp"

namespace korodisc {

struct VerifyOptions {
  /// Shrinks the n and m ranges of the rate checks.
  bool quick = false;
  /// Seeds every randomized sample; nothing else depends on it.
  std::uint64_t seed = 1;
  unsigned threads = 1;
  /// Run only the checks with these names (all when empty).
  std::vector<std::string> only;
};

struct CheckRecord {
  std::string name;
  /// Mathematical statement the check exercises.
  std::string anchor;
  /// Acceptance criterion number, 0 for supplementary checks.
  int criterion = 0;
  std::string tolerance;
  bool pass = false;
  /// Full numeric tables and fitted constants.
  Json measured;
  std::string error;
  double seconds = 0.0;
};

struct VerificationReport {
  std::string suite = "all";
  VerifyOptions options;
  std::vector<CheckRecord> checks;
  bool all_pass() const;
  /// Wall-clock fields and the thread count appear only when `timing` is set,
  /// so the default output is identical for any thread count.
  Json to_json(bool timing) const;
  /// One "PASS|FAIL  name  (criterion, tolerance)" line per check.
  std::string summary() const;
};

/// Names of all checks in execution order.
std::vector<std::string> verification_check_names();

VerificationReport run_verification(const VerifyOptions& opt);

}  // namespace korodisc
