#ifndef FRACMIX_FRACMIX_H
#define FRACMIX_FRACMIX_H

#include <stddef.h>
#include <stdint.h>

#if defined(FRACMIX_BUILDING_LIBRARY)
#define FRACMIX_API __attribute__((visibility("default")))
#else
#define FRACMIX_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fracmix_status {
  FRACMIX_OK = 0,
  FRACMIX_VALIDATION = 1,
  FRACMIX_EVALUATION = 2,
  FRACMIX_TRUNCATION = 3,
  FRACMIX_NONCONVERGENCE = 4,
  FRACMIX_SINGULAR = 5,
  FRACMIX_INVALID_HANDLE = 6,
  FRACMIX_IO = 7,
  FRACMIX_VERIFY = 8,
  FRACMIX_UNKNOWN = 99
} fracmix_status;

/* Opaque time series produced by the solvers. */
typedef struct fracmix_trajectory fracmix_trajectory;

/* Message of the last failed call on this thread; never NULL. */
FRACMIX_API const char* fracmix_last_error(void);
FRACMIX_API const char* fracmix_version(void);

/* E_{alpha,gamma}(x + i y) to absolute tolerance tol. */
FRACMIX_API fracmix_status fracmix_mittag_leffler(double alpha, double gamma, double x, double y, double tol,
                                                  double* re, double* im);

/* Scalar mixed-order relaxation v' + q D^alpha v + lambda v = 0, v(0) = v0,
   with a single constant coefficient. */
FRACMIX_API fracmix_status fracmix_ode_solve_l1(double alpha, double q, double lambda, double v0, double horizon,
                                                size_t n_steps, fracmix_trajectory** out);
/* Spectral-density solution at the given positive times. */
FRACMIX_API fracmix_status fracmix_ode_solve_spectral(double alpha, double q, double lambda, double v0,
                                                      const double* times, size_t n_times, fracmix_trajectory** out);

FRACMIX_API fracmix_status fracmix_trajectory_size(const fracmix_trajectory* traj, size_t* n);
/* Copy up to cap entries into buf. */
FRACMIX_API fracmix_status fracmix_trajectory_times(const fracmix_trajectory* traj, double* buf, size_t cap);
FRACMIX_API fracmix_status fracmix_trajectory_values(const fracmix_trajectory* traj, double* buf, size_t cap);
FRACMIX_API fracmix_status fracmix_trajectory_norms(const fracmix_trajectory* traj, double* buf, size_t cap);
FRACMIX_API void fracmix_trajectory_destroy(fracmix_trajectory* traj);

/* Two-sided decay constants of the relaxation solution for t >= t0. */
FRACMIX_API fracmix_status fracmix_decay_constants(double alpha, double q, double lambda, double t0,
                                                   double* c_lower, double* c_upper);

/* Log-log least-squares fit over [t_min, t_max]. */
FRACMIX_API fracmix_status fracmix_fit_decay(const double* times, const double* norms, size_t n, double t_min,
                                             double t_max, double* slope, double* intercept, double* rms);

/* Runs a CLI mode on a config file and writes its artifacts to out_dir.
   Returns FRACMIX_VERIFY when the run completed but some checks failed. */
FRACMIX_API fracmix_status fracmix_run(const char* mode, const char* config_path, const char* out_dir, int has_seed,
                                       uint64_t seed);

#ifdef __cplusplus
}
#endif

#endif
