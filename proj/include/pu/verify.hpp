#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pu/frequencies.hpp"
#include "pu/quantum.hpp"

// The invariant suite behind `pu verify`.
namespace pu::verify {

enum class Status { Pass, Fail, Skip };
const char* to_string(Status s);

struct CheckResult {
  std::string name;
  Status status = Status::Skip;
  /// Relative residual: absolute deviation over max(1, magnitude of inputs).
  double residual = 0.0;
  std::string note;
};

struct SuiteConfig {
  std::uint64_t seed = 0;
  double tolerance = 1e-10;
  quantum::QuantumConfig qc;
};

/// Runs every check that applies to `freqs`; the rest are reported skipped
/// with the reason in `note`.
std::vector<CheckResult> run_suite(const FrequencySet& freqs, const SuiteConfig& cfg);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace pu::verify
