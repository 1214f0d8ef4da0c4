#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

const fs::path& work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "fracmix_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_config(const std::string& name, const std::string& text) {
  const auto path = (work_dir() / name).string();
  std::ofstream(path) << text;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct Result {
  int code;
  std::string err;
};

Result run(const std::string& args) {
  const auto err_path = (work_dir() / "stderr.txt").string();
  const std::string cmd = std::string(FRACMIX_CLI_PATH) + " " + args + " 2> " + err_path + " > /dev/null";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err_path)};
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("successful run writes both artifacts") {
    const auto cfg = write_config("ode.cfg", "alpha = 0.5\nlambda = 1\nhorizon = 1\ntau = 1/32\n");
    const auto out = work_dir() / "ode_out";
    const auto r = run("ode --config " + cfg + " --out " + out.string());
    CHECK(r.code == 0);
    CHECK(r.err.empty());
    CHECK(fs::exists(out / "ode.csv"));
    CHECK(fs::exists(out / "ode.report.txt"));
  }

  TEST_CASE("validation failures exit 2 with one reason line") {
    const auto cfg = write_config("bad.cfg", "alpha = 0.5\nlambda = 1\nhorizon = 1\nunknown = 3\n");
    auto r = run("ode --config " + cfg + " --out " + (work_dir() / "x").string());
    CHECK(r.code == 2);
    CHECK(count_lines(r.err) == 1);
    CHECK(r.err.rfind("error=validation reason=", 0) == 0);

    r = run("ode");
    CHECK(r.code == 2);
    CHECK(r.err.rfind("error=usage", 0) == 0);
    r = run("fly --config " + cfg);
    CHECK(r.code == 2);
  }

  TEST_CASE("solver failures exit 3") {
    const auto cfg =
        write_config("picard.cfg", "alpha = 0.5\nn_x = 20\nhorizon = 1\nmethod = picard\nmax_iter = 2\n");
    const auto r = run("pde --config " + cfg + " --out " + (work_dir() / "p").string());
    CHECK(r.code == 3);
    CHECK(r.err.rfind("error=nonconvergence reason=", 0) == 0);
    CHECK(count_lines(r.err) == 1);
  }

  TEST_CASE("missing config exits 5") {
    const auto r = run("ode --config " + (work_dir() / "absent.cfg").string());
    CHECK(r.code == 5);
    CHECK(r.err.rfind("error=io", 0) == 0);
  }

  TEST_CASE("verify runs with a seed override and is byte-identical across runs") {
    const auto cfg = write_config("verify.cfg", "trials = 4\n");
    const auto a = work_dir() / "va", b = work_dir() / "vb";
    CHECK(run("verify --config " + cfg + " --out " + a.string() + " --seed 7").code == 0);
    CHECK(run("verify --config " + cfg + " --out " + b.string() + " --seed 7").code == 0);
    CHECK(slurp(a / "verify.report.txt") == slurp(b / "verify.report.txt"));
    CHECK(slurp(a / "verify.csv") == slurp(b / "verify.csv"));
    CHECK(slurp(a / "verify.csv").find("seed=7") != std::string::npos);
  }
}
