#include "fracmix/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracmix/error.hpp"
#include "fracmix/mlfunc.hpp"
#include "fracmix/special.hpp"

namespace fracmix::analysis {

using detail::require;

DecayFit fit_decay(std::span<const double> times, std::span<const double> norms, double t_min, double t_max) {
  require(times.size() == norms.size(), "fit_decay: times and norms differ in length");
  require(t_min >= 1.0 && t_max > t_min, "fit_decay: window must satisfy 1 <= t_min < t_max");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_min || times[i] > t_max) continue;
    require(norms[i] > 0.0 && std::isfinite(norms[i]),
            "fit_decay: non-positive norm at t = " + std::to_string(times[i]));
    lx.push_back(std::log(times[i]));
    ly.push_back(std::log(norms[i]));
  }
  require(lx.size() >= 5, "fit_decay: need at least 5 points inside the window");

  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  require(sxx > 0.0, "fit_decay: window points have identical times");

  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.t_min = t_min;
  fit.t_max = t_max;
  fit.n_points = lx.size();
  double ss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  fit.power_law = fit.rms_residual <= kPowerLawRms;
  return fit;
}

SandwichReport sandwich_check(std::span<const double> times, std::span<const double> values,
                              const fracode::DecayConstants& constants, double v0) {
  require(times.size() == values.size(), "sandwich_check: times and values differ in length");
  SandwichReport out;
  bool first = true;
  for (std::size_t i = 0; i < times.size(); ++i) {
    require(times[i] >= constants.t0, "sandwich_check: times must be >= t0");
    const double base = std::abs(v0) * std::pow(times[i], -constants.alpha);
    const double v = std::abs(values[i]);
    const double lower = constants.c_lower * base;
    const double upper = constants.c_upper * base;
    if (base > 0.0) {
      const double lo = v / lower;
      const double hi = v / upper;
      out.min_lower_margin = first ? lo : std::min(out.min_lower_margin, lo);
      out.max_upper_margin = first ? hi : std::max(out.max_upper_margin, hi);
      first = false;
    }
    if ((v < lower || v > upper) && !out.violating_index) {
      out.verdict = fracode::Verdict::fail;
      out.violating_index = i;
    }
  }
  return out;
}

std::vector<double> gronwall_envelope(std::span<const double> a, const fraccalc::TimeGrid& grid, double b,
                                      double beta) {
  require(a.size() == grid.size(), "gronwall_envelope: sequence does not match the grid");
  require(b >= 0.0 && std::isfinite(b), "gronwall_envelope: b must be >= 0");
  require(beta > 0.0 && beta <= 1.0, "gronwall_envelope: beta must lie in (0,1]");
  for (double v : a) require(v >= 0.0, "gronwall_envelope: a must be non-negative");

  const std::size_t n_steps = grid.n_steps();
  const double tau = grid.step();
  std::vector<double> out(a.begin(), a.end());
  if (b == 0.0) return out;

  const double c = b * special::gamma(beta);
  const mlfunc::MLParams e1{beta, beta + 1.0, 5.0, 1e-13};
  const mlfunc::MLParams e2{beta, beta + 2.0, 5.0, 1e-13};
  // m0(x) = int_0^x K, m1(x) = int_0^x s K(s) ds for K(s) = s^{beta-1} E_{beta,beta}(c s^beta).
  std::vector<double> m0(n_steps + 1, 0.0), m1(n_steps + 1, 0.0);
  for (std::size_t m = 1; m <= n_steps; ++m) {
    const double x = tau * static_cast<double>(m);
    const double xb = std::pow(x, beta);
    m0[m] = xb * mlfunc::mittag_leffler(e1, c * xb);
    m1[m] = x * m0[m] - x * xb * mlfunc::mittag_leffler(e2, c * xb);
  }
  for (std::size_t n = 1; n <= n_steps; ++n) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      // cell [t_j, t_{j+1}] in the lag variable s = t_n - t in [lo, hi]
      const std::size_t lo = n - j - 1, hi = n - j;
      const double s_lo = tau * static_cast<double>(lo), s_hi = tau * static_cast<double>(hi);
      const double d0 = m0[hi] - m0[lo];
      const double d1 = m1[hi] - m1[lo];
      sum += (a[j + 1] * (s_hi * d0 - d1) + a[j] * (d1 - s_lo * d0)) / tau;
    }
    out[n] += c * sum;
  }
  return out;
}

std::vector<double> energy_residuals(const Trajectory& traj, const fraccalc::OrderSpec& spec, double lambda1) {
  require(traj.grid().has_value(), "energy_residuals: trajectory must live on a uniform grid");
  require(lambda1 > 0.0, "energy_residuals: lambda1 must be positive");
  const fraccalc::TimeGrid& grid = *traj.grid();
  const std::vector<double>& norms = traj.norms();
  std::vector<double> r = fraccalc::multi_term_apply(norms, spec, grid);
  r[0] = 0.0;
  for (std::size_t n = 1; n < r.size(); ++n) r[n] += (norms[n] - norms[n - 1]) / grid.step() + lambda1 * norms[n];
  return r;
}

}  // namespace fracmix::analysis
