#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fracmix/fraccalc.hpp"
#include "fracmix/fracode.hpp"
#include "fracmix/trajectory.hpp"

namespace fracmix::analysis {

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;  // log-norm at t = 1
  double t_min = 0.0;
  double t_max = 0.0;
  double rms_residual = 0.0;
  std::size_t n_points = 0;
  bool power_law = true;  // rms_residual below kPowerLawRms
};

// Log-log residual above which a fit is flagged as not a power law.
inline constexpr double kPowerLawRms = 0.01;

/// Least-squares line through (log t, log norm) for t in [t_min, t_max].
DecayFit fit_decay(std::span<const double> times, std::span<const double> norms, double t_min, double t_max);

struct SandwichReport {
  fracode::Verdict verdict = fracode::Verdict::pass;
  double min_lower_margin = 1.0;  // min |v| / (c_lower |v0| t^-alpha)
  double max_upper_margin = 1.0;  // max |v| / (c_upper |v0| t^-alpha)
  std::optional<std::size_t> violating_index;
};

/// c_lower |v0| t^-alpha <= |v(t)| <= c_upper |v0| t^-alpha at every sample.
SandwichReport sandwich_check(std::span<const double> times, std::span<const double> values,
                              const fracode::DecayConstants& constants, double v0);

/// a(t) + b Gamma(beta) int_0^t (t-s)^{beta-1} E_{beta,beta}(b Gamma(beta) (t-s)^beta) a(s) ds
/// at the grid nodes, by product integration against piecewise-linear a.
std::vector<double> gronwall_envelope(std::span<const double> a, const fraccalc::TimeGrid& grid, double b,
                                      double beta);

/// D_t |u^n| + sum_j q_j(t_n) D^{alpha_j} |u^n| + lambda1 |u^n| from the norm
/// track; entry 0 is zero.
std::vector<double> energy_residuals(const Trajectory& traj, const fraccalc::OrderSpec& spec, double lambda1);

}  // namespace fracmix::analysis
