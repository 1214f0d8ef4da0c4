#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fracmix::cli {

/// One of ml-eval, ode, pde, decay, verify, compare.
struct RunRequest {
  std::string mode;
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides the `seed` key
};

struct RunOutcome {
  std::string csv_path;
  std::string report_path;
  std::size_t checks_failed = 0;  // verify and compare verdicts
};

const std::vector<std::string>& modes();

/// Parses the config, runs the mode and writes `<out>/<mode>.csv` and
/// `<out>/<mode>.report.txt`. Library errors propagate unchanged.
RunOutcome run(const RunRequest& request);

/// Same with the config given as text.
RunOutcome run_text(const std::string& mode, const std::string& config_text, const std::string& out_dir,
                    std::optional<std::uint64_t> seed);

}  // namespace fracmix::cli
