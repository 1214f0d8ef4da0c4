#include "fracmix/fracmix.h"

#include <algorithm>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "fracmix/analysis.hpp"
#include "fracmix/error.hpp"
#include "fracmix/experiment.hpp"
#include "fracmix/fracode.hpp"
#include "fracmix/mlfunc.hpp"

struct fracmix_trajectory {
  fracmix::Trajectory traj;
};

namespace {

thread_local std::string g_last_error;

fracmix_status status_of(fracmix::ErrorCode code) {
  switch (code) {
    case fracmix::ErrorCode::validation: return FRACMIX_VALIDATION;
    case fracmix::ErrorCode::evaluation: return FRACMIX_EVALUATION;
    case fracmix::ErrorCode::truncation: return FRACMIX_TRUNCATION;
    case fracmix::ErrorCode::non_convergence: return FRACMIX_NONCONVERGENCE;
    case fracmix::ErrorCode::singular: return FRACMIX_SINGULAR;
    case fracmix::ErrorCode::io: return FRACMIX_IO;
  }
  return FRACMIX_UNKNOWN;
}

template <class F>
fracmix_status guarded(F&& body) {
  try {
    const fracmix_status s = body();
    if (s == FRACMIX_OK) g_last_error.clear();
    return s;
  } catch (const fracmix::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return FRACMIX_UNKNOWN;
}

fracmix_status fail(fracmix_status s, const char* msg) {
  g_last_error = msg;
  return s;
}

fracmix::fracode::FracOdeProblem relaxation(double alpha, double q, double lambda, double v0, double horizon) {
  fracmix::fracode::FracOdeProblem p;
  p.spec = fracmix::fraccalc::OrderSpec::single_constant(alpha, q);
  p.lambda = lambda;
  p.v0 = v0;
  p.horizon = horizon;
  return p;
}

fracmix_status copy_out(const fracmix_trajectory* t, double* buf, size_t cap, const std::vector<double>& src) {
  if (!t) return fail(FRACMIX_INVALID_HANDLE, "null trajectory handle");
  if (!buf && cap > 0) return fail(FRACMIX_VALIDATION, "null output buffer");
  std::copy_n(src.begin(), std::min(cap, src.size()), buf);
  g_last_error.clear();
  return FRACMIX_OK;
}

}  // namespace

extern "C" {

const char* fracmix_last_error(void) { return g_last_error.c_str(); }

const char* fracmix_version(void) { return "0.1.0"; }

fracmix_status fracmix_mittag_leffler(double alpha, double gamma, double x, double y, double tol, double* re,
                                      double* im) {
  return guarded([&] {
    if (!re || !im) return fail(FRACMIX_VALIDATION, "null output pointer");
    const fracmix::mlfunc::MLParams p{alpha, gamma, 5.0, tol};
    const auto v = fracmix::mlfunc::mittag_leffler(p, {x, y});
    *re = v.real();
    *im = v.imag();
    return FRACMIX_OK;
  });
}

fracmix_status fracmix_ode_solve_l1(double alpha, double q, double lambda, double v0, double horizon,
                                    size_t n_steps, fracmix_trajectory** out) {
  return guarded([&] {
    if (!out) return fail(FRACMIX_VALIDATION, "null output handle");
    *out = nullptr;
    const auto p = relaxation(alpha, q, lambda, v0, horizon);
    const fracmix::fraccalc::TimeGrid grid(0.0, horizon, n_steps);
    *out = new fracmix_trajectory{fracmix::fracode::solve_l1(p, grid)};
    return FRACMIX_OK;
  });
}

fracmix_status fracmix_ode_solve_spectral(double alpha, double q, double lambda, double v0, const double* times,
                                          size_t n_times, fracmix_trajectory** out) {
  return guarded([&] {
    if (!out) return fail(FRACMIX_VALIDATION, "null output handle");
    *out = nullptr;
    if (!times || n_times == 0) return fail(FRACMIX_VALIDATION, "need at least one time");
    const std::vector<double> ts(times, times + n_times);
    const double t_min = *std::min_element(ts.begin(), ts.end());
    if (!(t_min > 0.0)) return fail(FRACMIX_VALIDATION, "times must be positive");
    const auto params = fracmix::fracode::SpectralDensity::make(alpha, q, lambda, t_min);
    *out = new fracmix_trajectory{fracmix::fracode::solve_spectral(params, v0, ts)};
    return FRACMIX_OK;
  });
}

fracmix_status fracmix_trajectory_size(const fracmix_trajectory* traj, size_t* n) {
  if (!traj) return fail(FRACMIX_INVALID_HANDLE, "null trajectory handle");
  if (!n) return fail(FRACMIX_VALIDATION, "null output pointer");
  *n = traj->traj.size();
  g_last_error.clear();
  return FRACMIX_OK;
}

fracmix_status fracmix_trajectory_times(const fracmix_trajectory* traj, double* buf, size_t cap) {
  return guarded([&] { return copy_out(traj, buf, cap, traj ? traj->traj.times() : std::vector<double>{}); });
}

fracmix_status fracmix_trajectory_values(const fracmix_trajectory* traj, double* buf, size_t cap) {
  return guarded([&] {
    if (traj && !traj->traj.is_scalar()) return fail(FRACMIX_VALIDATION, "trajectory is not scalar");
    return copy_out(traj, buf, cap, traj ? traj->traj.values() : std::vector<double>{});
  });
}

fracmix_status fracmix_trajectory_norms(const fracmix_trajectory* traj, double* buf, size_t cap) {
  return guarded([&] { return copy_out(traj, buf, cap, traj ? traj->traj.norms() : std::vector<double>{}); });
}

void fracmix_trajectory_destroy(fracmix_trajectory* traj) { delete traj; }

fracmix_status fracmix_decay_constants(double alpha, double q, double lambda, double t0, double* c_lower,
                                       double* c_upper) {
  return guarded([&] {
    if (!c_lower || !c_upper) return fail(FRACMIX_VALIDATION, "null output pointer");
    const auto params = fracmix::fracode::SpectralDensity::make(alpha, q, lambda, t0);
    const auto c = fracmix::fracode::decay_constants(params, t0);
    *c_lower = c.c_lower;
    *c_upper = c.c_upper;
    return FRACMIX_OK;
  });
}

fracmix_status fracmix_fit_decay(const double* times, const double* norms, size_t n, double t_min, double t_max,
                                 double* slope, double* intercept, double* rms) {
  return guarded([&] {
    if (!times || !norms || !slope || !intercept || !rms) return fail(FRACMIX_VALIDATION, "null pointer argument");
    const auto fit = fracmix::analysis::fit_decay({times, n}, {norms, n}, t_min, t_max);
    *slope = fit.slope;
    *intercept = fit.intercept;
    *rms = fit.rms_residual;
    return FRACMIX_OK;
  });
}

fracmix_status fracmix_run(const char* mode, const char* config_path, const char* out_dir, int has_seed,
                           uint64_t seed) {
  return guarded([&] {
    if (!mode || !config_path) return fail(FRACMIX_VALIDATION, "mode and config path are required");
    fracmix::cli::RunRequest req;
    req.mode = mode;
    req.config_path = config_path;
    req.out_dir = out_dir ? out_dir : ".";
    if (has_seed) req.seed = seed;
    const auto outcome = fracmix::cli::run(req);
    if (outcome.checks_failed > 0)
      return fail(FRACMIX_VERIFY, (std::to_string(outcome.checks_failed) + " check(s) failed").c_str());
    return FRACMIX_OK;
  });
}

}  // extern "C"
