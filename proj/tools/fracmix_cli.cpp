#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "fracmix/fracmix.h"

namespace {

// Process exit codes.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;
constexpr int kExitChecks = 4;
constexpr int kExitIo = 5;

int exit_code(fracmix_status s) {
  switch (s) {
    case FRACMIX_OK: return kExitOk;
    case FRACMIX_VALIDATION: return kExitValidation;
    case FRACMIX_IO: return kExitIo;
    case FRACMIX_VERIFY: return kExitChecks;
    default: return kExitSolver;
  }
}

const char* status_tag(fracmix_status s) {
  switch (s) {
    case FRACMIX_VALIDATION: return "validation";
    case FRACMIX_EVALUATION: return "evaluation";
    case FRACMIX_TRUNCATION: return "truncation";
    case FRACMIX_NONCONVERGENCE: return "nonconvergence";
    case FRACMIX_SINGULAR: return "singular";
    case FRACMIX_IO: return "io";
    case FRACMIX_VERIFY: return "checks_failed";
    default: return "internal";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-order time-fractional diffusion solver"};
  std::string mode, config, out = ".";
  std::uint64_t seed = 0;
  app.add_option("mode", mode, "ml-eval | ode | pde | decay | verify | compare")
      ->required()
      ->check(CLI::IsMember({"ml-eval", "ode", "pde", "decay", "verify", "compare"}));
  app.add_option("--config", config, "key = value config file")->required();
  app.add_option("--out", out, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "seed overriding the config");
  app.set_version_flag("--version", std::string(fracmix_version()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (char& c : msg)
      if (c == '\n') c = ' ';
    std::fprintf(stderr, "error=usage reason=%s\n", msg.c_str());
    return kExitValidation;
  }

  const fracmix_status s = fracmix_run(mode.c_str(), config.c_str(), out.c_str(), seed_opt->count() > 0, seed);
  if (s != FRACMIX_OK) {
    std::string msg = fracmix_last_error();
    for (char& c : msg)
      if (c == '\n') c = ' ';
    std::fprintf(stderr, "error=%s reason=%s\n", status_tag(s), msg.c_str());
  }
  return exit_code(s);
}
