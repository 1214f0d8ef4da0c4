#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "fracmix/fracmix.h"

TEST_SUITE("capi") {
  TEST_CASE("Mittag-Leffler through the C interface") {
    double re = 0.0, im = 0.0;
    REQUIRE(fracmix_mittag_leffler(0.5, 1.0, -2.0, 0.0, 1e-12, &re, &im) == FRACMIX_OK);
    CHECK(re == doctest::Approx(std::exp(4.0) * std::erfc(2.0)).epsilon(1e-11));
    CHECK(im == 0.0);
    CHECK(fracmix_mittag_leffler(-1.0, 1.0, 0.0, 0.0, 1e-12, &re, &im) == FRACMIX_VALIDATION);
    CHECK(std::string(fracmix_last_error()).find("alpha") != std::string::npos);
    CHECK(fracmix_mittag_leffler(0.5, 1.0, 0.0, 0.0, 1e-12, nullptr, &im) == FRACMIX_VALIDATION);
  }

  TEST_CASE("trajectory handles") {
    fracmix_trajectory* l1 = nullptr;
    REQUIRE(fracmix_ode_solve_l1(0.5, 1.0, 1.0, 1.0, 1.0, 1024, &l1) == FRACMIX_OK);
    size_t n = 0;
    REQUIRE(fracmix_trajectory_size(l1, &n) == FRACMIX_OK);
    CHECK(n == 1025);
    std::vector<double> ts(n), vs(n), ns(n);
    CHECK(fracmix_trajectory_times(l1, ts.data(), n) == FRACMIX_OK);
    CHECK(fracmix_trajectory_values(l1, vs.data(), n) == FRACMIX_OK);
    CHECK(fracmix_trajectory_norms(l1, ns.data(), n) == FRACMIX_OK);
    CHECK(ts.back() == 1.0);
    CHECK(vs.front() == 1.0);
    CHECK(ns.back() == doctest::Approx(std::abs(vs.back())));

    const double t1 = 1.0;
    fracmix_trajectory* sp = nullptr;
    REQUIRE(fracmix_ode_solve_spectral(0.5, 1.0, 1.0, 1.0, &t1, 1, &sp) == FRACMIX_OK);
    double v = 0.0;
    CHECK(fracmix_trajectory_values(sp, &v, 1) == FRACMIX_OK);
    CHECK(std::abs(v - vs.back()) / v <= 1e-3);

    fracmix_trajectory_destroy(l1);
    fracmix_trajectory_destroy(sp);
    fracmix_trajectory_destroy(nullptr);
    CHECK(fracmix_trajectory_size(nullptr, &n) == FRACMIX_INVALID_HANDLE);
    CHECK(fracmix_trajectory_times(nullptr, ts.data(), n) == FRACMIX_INVALID_HANDLE);
  }

  TEST_CASE("solver errors map to distinct status codes") {
    fracmix_trajectory* t = nullptr;
    CHECK(fracmix_ode_solve_l1(1.5, 1.0, 1.0, 1.0, 1.0, 16, &t) == FRACMIX_VALIDATION);
    CHECK(t == nullptr);
    const double zero = 0.0;
    CHECK(fracmix_ode_solve_spectral(0.5, 1.0, 1.0, 1.0, &zero, 1, &t) == FRACMIX_VALIDATION);
  }

  TEST_CASE("decay constants and fit") {
    double lo = 0.0, hi = 0.0;
    REQUIRE(fracmix_decay_constants(0.5, 1.0, 1.0, 1.0, &lo, &hi) == FRACMIX_OK);
    CHECK(lo > 0.0);
    CHECK(hi > lo);
    std::vector<double> ts, ns;
    for (int i = 0; i < 10; ++i) {
      ts.push_back(10.0 * (i + 1));
      ns.push_back(std::pow(ts.back(), -0.25));
    }
    double slope = 0.0, icpt = 0.0, rms = 1.0;
    REQUIRE(fracmix_fit_decay(ts.data(), ns.data(), ts.size(), 10.0, 100.0, &slope, &icpt, &rms) == FRACMIX_OK);
    CHECK(slope == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(rms <= 1e-12);
  }

  TEST_CASE("run dispatches a mode and reports check failures and I/O errors") {
    const auto dir = std::filesystem::temp_directory_path() / "fracmix_capi_run";
    std::filesystem::create_directories(dir);
    const auto cfg = (dir / "verify.cfg").string();
    std::ofstream(cfg) << "trials = 2\n";
    CHECK(fracmix_run("verify", cfg.c_str(), dir.string().c_str(), 1, 42) == FRACMIX_OK);
    CHECK(std::filesystem::exists(dir / "verify.report.txt"));
    CHECK(fracmix_run("verify", (dir / "missing.cfg").string().c_str(), dir.string().c_str(), 0, 0) == FRACMIX_IO);
    CHECK(fracmix_run(nullptr, cfg.c_str(), nullptr, 0, 0) == FRACMIX_VALIDATION);
    CHECK(std::string(fracmix_version()) == "0.1.0");
  }
}
