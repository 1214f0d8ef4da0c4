#include "fracmix/mlfunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fracmix/error.hpp"
#include "fracmix/fraccalc.hpp"
#include "fracmix/quadrature.hpp"
#include "fracmix/special.hpp"

namespace fracmix::mlfunc {

using cplx = std::complex<double>;
using detail::require;

namespace {

constexpr std::size_t kMaxTerms = 100000;
constexpr double kPi = std::numbers::pi;

struct Attempt {
  cplx value;
  double error = std::numeric_limits<double>::infinity();
  std::string why;
};

// Power series with the three-small-terms stop. The error bound adds the
// rounding incurred by summing terms of large magnitude.
Attempt series(double alpha, double beta, cplx z, double tol) {
  Attempt out;
  if (z == 0.0) {
    out.value = special::rgamma(beta);
    out.error = 0.0;
    return out;
  }
  const double log_r = std::log(std::abs(z));
  const double theta = std::arg(z);
  cplx sum = 0.0;
  double magnitude = 0.0;
  double last = std::numeric_limits<double>::infinity();
  int small = 0;
  for (std::size_t k = 0; k < kMaxTerms; ++k) {
    const double kd = static_cast<double>(k);
    const double log_mag = kd * log_r - special::log_gamma(alpha * kd + beta);
    if (log_mag > 700.0) {
      out.why = "series terms overflow";
      return out;
    }
    const double mag = std::exp(log_mag);
    sum += std::polar(mag, kd * theta);
    magnitude += mag;
    if (mag < 0.1 * tol && mag <= last) {
      if (++small >= 3) {
        out.value = sum;
        out.error = 4.0 * std::numeric_limits<double>::epsilon() * magnitude + mag;
        if (out.error > 0.1 * tol) out.why = "cancellation in series";
        return out;
      }
    } else {
      small = 0;
    }
    last = mag;
  }
  out.why = "series iteration cap reached";
  return out;
}

// E_{1,b}(-x) = e^{-x} 1F1(b-1; b; x) / Gamma(b): all terms of one sign.
Attempt kummer_negative(double beta, double x, double tol) {
  Attempt out;
  if (x > 700.0) {
    out.why = "Kummer weights underflow";
    return out;
  }
  double poisson = std::exp(-x);
  double sum = poisson;
  const double a = beta - 1.0;
  int small = 0;
  for (std::size_t k = 1; k < kMaxTerms; ++k) {
    const double kd = static_cast<double>(k);
    poisson *= x / kd;
    const double term = poisson * a / (a + kd);
    sum += term;
    if (kd > x && std::abs(term) < 0.01 * tol) {
      if (++small >= 3) {
        out.value = sum * special::rgamma(beta);
        out.error = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(out.value) + std::abs(term);
        return out;
      }
    } else {
      small = 0;
    }
  }
  out.why = "Kummer iteration cap reached";
  return out;
}

// E_{a,b}(-x) for 0 < a < 1 as the Laplace transform at t = 1 of
// r^{a-b} (r^a sin(pi b) + x sin(pi (b-a))) / (pi |r^a e^{i pi a} + x|^2).
// Valid for b < 1 + a; larger b is reduced by the recurrence
// E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a)) / z.
Attempt density_negative(double alpha, double beta, double x, double tol) {
  if (beta >= 1.0 + alpha) {
    Attempt inner = density_negative(alpha, beta - alpha, x, tol * x);
    if (!inner.why.empty() && inner.error > tol * x) return inner;
    Attempt out;
    out.value = (inner.value - special::rgamma(beta - alpha)) / (-x);
    out.error = inner.error / x;
    return out;
  }
  const double s_beta = std::sin(kPi * beta);
  const double s_shift = std::sin(kPi * (beta - alpha));
  const double c_alpha = std::cos(kPi * alpha);
  const auto g = [=](double r) {
    const double ra = std::pow(r, alpha);
    return (ra * s_beta + x * s_shift) / (kPi * (ra * ra + 2.0 * x * ra * c_alpha + x * x));
  };

  quadrature::DensityOptions opts;
  const double peak = std::pow(x, 1.0 / alpha);
  opts.split = std::min(1.0, 0.5 * peak);
  opts.r_max = std::max(80.0, 2.0 * opts.split + 1.0);
  opts.rel_tol = std::clamp(1e-3 * tol, 1e-13, 1e-9);
  opts.abs_tol = 1e-3 * tol;
  opts.smooth_power = alpha;
  if (peak < opts.r_max) opts.breakpoints.push_back(peak);
  if (c_alpha < 0.0) {
    const double dip = std::pow(-x * c_alpha, 1.0 / alpha);
    if (dip < opts.r_max) opts.breakpoints.push_back(dip);
  }
  const auto est = quadrature::integrate_power_weighted(g, alpha - beta, 1.0, opts);
  Attempt out;
  out.value = est.value;
  // Tail beyond r_max is below e^{-80} times a polynomial bound of the density.
  out.error = est.error;
  if (out.error > tol) out.why = "density quadrature error above tolerance";
  return out;
}

// Algebraic expansion -sum_k z^{-k}/Gamma(b - a k), optimally truncated, plus
// the exponential contribution inside the sector |arg z| < min(pi, a pi).
Attempt asymptotic(double alpha, double beta, cplx z, double tol) {
  Attempt out;
  const double r = std::abs(z);
  if (r < 1.0) {
    out.why = "|z| too small for the asymptotic expansion";
    return out;
  }
  const double theta = std::arg(z);
  cplx sum = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  double err = std::numeric_limits<double>::infinity();
  const cplx inv = 1.0 / z;
  cplx power = 1.0;
  for (int k = 1; k <= 400; ++k) {
    power *= inv;
    const double rg = special::rgamma(beta - alpha * k);
    const cplx term = power * rg;
    const double mag = std::abs(term);
    if (rg != 0.0) {
      if (mag > prev) break;  // divergent from here on
      prev = mag;
    }
    sum -= term;
    if (rg != 0.0) err = mag;
    if (mag == 0.0 && rg != 0.0) break;
  }
  if (!std::isfinite(err)) err = 0.0;

  const double sector = std::min(kPi, alpha * kPi);
  if (std::abs(theta) < sector) {
    const cplx root = std::pow(z, 1.0 / alpha);
    sum += std::pow(z, (1.0 - beta) / alpha) * std::exp(root) / alpha;
  } else if (alpha > 1.0) {
    // Neglected exponentials of the non-principal branches.
    err += 2.0 / alpha * std::pow(r, (1.0 - beta) / alpha) * std::exp(std::pow(r, 1.0 / alpha) * std::cos(kPi / alpha));
  }
  out.value = sum;
  out.error = err;
  if (err > tol) out.why = "asymptotic expansion not accurate at this |z|";
  return out;
}

bool on_negative_axis(cplx z) { return z.imag() == 0.0 && z.real() < 0.0; }

Attempt run(const MLParams& p, cplx z, Regime regime) {
  switch (regime) {
    case Regime::series:
      return series(p.alpha, p.gamma, z, p.target_tol);
    case Regime::negative_axis: {
      if (!on_negative_axis(z) || p.alpha > 1.0) {
        Attempt a;
        a.why = "negative-axis regime needs real z < 0 and alpha <= 1";
        return a;
      }
      if (p.alpha == 1.0) return kummer_negative(p.gamma, -z.real(), p.target_tol);
      return density_negative(p.alpha, p.gamma, -z.real(), p.target_tol);
    }
    case Regime::asymptotic:
      return asymptotic(p.alpha, p.gamma, z, p.target_tol);
    case Regime::automatic:
      break;
  }
  return {};
}

}  // namespace

void MLParams::validate() const {
  require(alpha > 0.0 && std::isfinite(alpha), "MLParams: alpha must be positive");
  require(alpha < 2.0, "MLParams: alpha >= 2 is not supported");
  require(gamma > 0.0 && std::isfinite(gamma), "MLParams: gamma must be positive");
  require(series_radius > 0.0, "MLParams: series_radius must be positive");
  require(target_tol > 0.0 && target_tol <= 1e-6, "MLParams: target_tol must lie in (0, 1e-6]");
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::automatic:
      return "automatic";
    case Regime::series:
      return "series";
    case Regime::negative_axis:
      return "negative_axis";
    case Regime::asymptotic:
      return "asymptotic";
  }
  return "unknown";
}

cplx mittag_leffler(const MLParams& params, cplx z, Regime regime) {
  params.validate();
  require(std::isfinite(z.real()) && std::isfinite(z.imag()), "mittag_leffler: z must be finite");
  if (regime == Regime::automatic) return mittag_leffler(params, z);
  const Attempt a = run(params, z, regime);
  if (!a.why.empty() || !(a.error <= params.target_tol))
    throw EvaluationFailure(regime_name(regime), z, a.why.empty() ? "tolerance not met" : a.why);
  return a.value;
}

cplx mittag_leffler(const MLParams& params, cplx z) {
  params.validate();
  require(std::isfinite(z.real()) && std::isfinite(z.imag()), "mittag_leffler: z must be finite");
  const double r = std::abs(z);
  Attempt last;
  Regime last_regime = Regime::series;

  // On the positive axis E grows like exp(z^{1/alpha}); the tolerance is relative there.
  const bool positive = z.imag() == 0.0 && z.real() > 0.0;
  const auto accept = [&](const Attempt& a) {
    const double scale = positive ? std::max(1.0, std::abs(a.value)) : 1.0;
    return a.error <= params.target_tol * scale && (a.why.empty() || positive);
  };

  if (r <= params.series_radius) {
    last = run(params, z, Regime::series);
    if (accept(last)) return last.value;
  }
  if (on_negative_axis(z) && params.alpha <= 1.0) {
    last = run(params, z, Regime::negative_axis);
    last_regime = Regime::negative_axis;
    if (accept(last)) return last.value;
  }
  if (positive && r > params.series_radius) {
    // Positive terms: no cancellation, only overflow can stop the series.
    last = run(params, z, Regime::series);
    last_regime = Regime::series;
    if (accept(last)) return last.value;
  }
  last = run(params, z, Regime::asymptotic);
  last_regime = Regime::asymptotic;
  if (accept(last)) return last.value;
  throw EvaluationFailure(regime_name(last_regime), z, last.why.empty() ? "tolerance not met" : last.why);
}

double mittag_leffler(const MLParams& params, double x) { return mittag_leffler(params, cplx(x, 0.0)).real(); }

DerivativeResiduals ml_derivative_residuals(double alpha, double mu, double t, double h) {
  require(alpha > 0.0 && alpha < 1.0, "ml_derivative_residuals: alpha must lie in (0,1)");
  require(mu >= 0.0, "ml_derivative_residuals: mu must be non-negative");
  require(h > 0.0 && t > h, "ml_derivative_residuals: need t > h > 0");

  MLParams e1{alpha, 1.0, 5.0, 1e-13};
  MLParams ea{alpha, alpha, 5.0, 1e-13};
  const auto relax = [&](double s) { return mittag_leffler(e1, -mu * std::pow(s, alpha)); };

  DerivativeResiduals out;
  const double central = (relax(t + h) - relax(t - h)) / (2.0 * h);
  const double rhs = -mu * std::pow(t, alpha - 1.0) * mittag_leffler(ea, -mu * std::pow(t, alpha));
  out.first_order = std::abs(central - rhs);

  const fraccalc::TimeGrid grid = fraccalc::TimeGrid::from_step(t, h);
  std::vector<double> values(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n) values[n] = relax(grid[n]);
  const std::vector<double> d = fraccalc::caputo_l1(values, alpha, grid);
  out.fractional = std::abs(d.back() + mu * values.back());
  return out;
}

double sector_constant(const MLParams& params, std::span<const double> xs) {
  double c = 0.0;
  for (double x : xs) {
    require(x >= 0.0, "sector_constant: samples must be non-negative");
    c = std::max(c, (1.0 + x) * std::abs(mittag_leffler(params, cplx(-x, 0.0))));
  }
  return c;
}

}  // namespace fracmix::mlfunc
