// Invariant audit: one entry point that exercises every structural property
// the library promises (kernel identities, symbol algebra, ray conservation,
// synthesis oracles, serialization determinism) and reports pass/fail per
// check with the measured extreme and the pinned threshold.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace raystone {

struct VerifyCheck {
  std::string name;
  bool pass = false;
  double measured = 0;   // worst value observed for this property
  double threshold = 0;  // bound the measurement must respect
  std::string note;      // direction of the comparison or extra context
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<VerifyCheck> checks;

  bool all_pass() const;
  // Deterministic plain-text report: same seed => byte-identical text.
  std::string to_text() const;
  std::string to_json() const;
};

// Runs the full audit.  All randomness derives from `seed`; two runs with the
// same seed produce byte-identical reports.
VerifyReport run_verify(std::uint64_t seed);

}  // namespace raystone
