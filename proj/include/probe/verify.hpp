#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace probe {

struct VerifyOptions {
  std::string suite = "all";  // all | linalg | states | measures | moments
  std::uint64_t seed = 2024;
  /// Self-test of the harness: flips the sign of the average prefactor.
  bool negatePrefactor = false;
};

struct InvariantResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::size_t count = 0;
  double worstResidual = 0.0;
};

std::vector<InvariantResult> run_verify(const VerifyOptions& options);
bool all_passed(const std::vector<InvariantResult>& results);
void write_verify_json(std::ostream& out, const std::vector<InvariantResult>& results);

}  // namespace probe
