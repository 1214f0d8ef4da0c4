#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace fracmix::cli {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // key=value summary of the measured quantities
};

/// Randomized invariant suite; every draw comes from Rng(seed) in a fixed
/// order, so results are reproducible. `trials` scales the random draws.
std::vector<CheckResult> run_verify_suite(std::uint64_t seed, std::size_t trials);

}  // namespace fracmix::cli
