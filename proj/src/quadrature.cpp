#include "fracmix/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fracmix/error.hpp"
#include "fracmix/special.hpp"

namespace fracmix::quadrature {

Rule gauss_jacobi(int n, double a, double b) {
  detail::require(n >= 1, "gauss_jacobi: need at least one node");
  detail::require(a > -1.0 && b > -1.0, "gauss_jacobi: exponents must exceed -1");

  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  const double ab = a + b;
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + ab;
    if (k == 0) {
      diag(k) = (b - a) / (ab + 2.0);
    } else {
      diag(k) = (b * b - a * a) / (s * (s + 2.0));
    }
  }
  for (int k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + ab;
    double beta;
    if (k == 1) {
      beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      beta = 4.0 * kk * (kk + a) * (kk + b) * (kk + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    sub(k - 1) = std::sqrt(beta);
  }

  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes[0] = diag(0);
  }
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + special::log_gamma(a + 1.0) +
                              special::log_gamma(b + 1.0) - special::log_gamma(ab + 2.0));
  if (n == 1) {
    rule.weights[0] = mu0;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = solver.eigenvalues()(k);
    const double v0 = solver.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v0 * v0;
  }
  return rule;
}

Rule gauss_jacobi_left_singular(int n, double p, double len) {
  Rule rule = gauss_jacobi(n, 0.0, p);
  // r = len (1 + x) / 2, r^p dr = (len/2)^{p+1} (1+x)^p dx
  const double scale = std::pow(0.5 * len, p + 1.0);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = 0.5 * len * (1.0 + rule.nodes[k]);
    rule.weights[k] *= scale;
  }
  return rule;
}

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

// One Gauss-Kronrod panel: value, error estimate and integral of |f|.
struct Panel {
  double value;
  double error;
  double l1;
};

// The error is |K31 - G15| plus rounding; Boost's own estimate carries an
// absolute floor that swamps small integrals.
Panel panel(const std::function<double(double)>& f, double a, double b) {
  Panel p{};
  double unused = 0.0;
  p.value = Kronrod::integrate(f, a, b, 0, 0.0, &unused, &p.l1);
  const double gauss = boost::math::quadrature::gauss<double, 15>::integrate(f, a, b);
  p.error = std::abs(p.value - gauss) + 4.0 * std::numeric_limits<double>::epsilon() * p.l1;
  return p;
}

Estimate bisect(const std::function<double(double)>& f, double a, double b, const Panel& whole, double abs_tol,
                unsigned depth) {
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * whole.l1;
  if (whole.error <= std::max(abs_tol, floor) || depth == 0) return {whole.value, whole.error};
  const double mid = 0.5 * (a + b);
  const Estimate left = bisect(f, a, mid, panel(f, a, mid), 0.5 * abs_tol, depth - 1);
  const Estimate right = bisect(f, mid, b, panel(f, mid, b), 0.5 * abs_tol, depth - 1);
  return {left.value + right.value, left.error + right.error};
}

}  // namespace

// Bisection driven here rather than by Boost, whose recursion sums the
// error heuristics of every leaf once the tolerance nears roundoff.
Estimate adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                  unsigned max_depth) {
  if (!(b > a)) return {};
  const Panel whole = panel(f, a, b);
  return bisect(f, a, b, whole, rel_tol * std::abs(whole.value), max_depth);
}

DensityEstimate integrate_power_weighted(const std::function<double(double)>& g, double p, double t,
                                         const DensityOptions& opts) {
  detail::require(p > -1.0, "integrate_power_weighted: weight exponent must exceed -1");
  detail::require(opts.split > 0.0 && opts.r_max > opts.split,
                  "integrate_power_weighted: need 0 < split < r_max");
  detail::require(t >= 0.0, "integrate_power_weighted: t must be non-negative");
  detail::require(opts.smooth_power > 0.0 && opts.smooth_power <= 1.0,
                  "integrate_power_weighted: smooth_power must lie in (0,1]");

  // Smooth part inside the Jacobi cell, and the full integrand outside it.
  const auto smooth = [&](double r) { return std::exp(-r * t) * g(r); };
  const auto full = [&](double r) { return std::exp(-r * t) * std::pow(r, p) * g(r); };

  double eps = opts.split;
  if (t > 0.0) eps = std::min(eps, 1.0 / t);

  // In s = r^mu the cell integral is (1/mu) int_0^{len^mu} s^{(p+1)/mu - 1} smooth(s^{1/mu}) ds.
  const double mu = opts.smooth_power;
  const double p_s = (p + 1.0) / mu - 1.0;

  // Rules depend only on the node count and p_s; scale them per cell.
  std::vector<std::pair<int, Rule>> unit_rules;
  const auto unit_rule = [&](int n) -> const Rule& {
    for (const auto& [m, rule] : unit_rules)
      if (m == n) return rule;
    unit_rules.emplace_back(n, gauss_jacobi(n, 0.0, p_s));
    return unit_rules.back().second;
  };
  const auto jacobi_cell = [&](int n, double len) {
    const Rule& unit = unit_rule(n);
    const double s_len = std::pow(len, mu);
    const double scale = std::pow(0.5 * s_len, p_s + 1.0) / mu;
    double sum = 0.0;
    for (std::size_t k = 0; k < unit.nodes.size(); ++k)
      sum += unit.weights[k] * smooth(std::pow(0.5 * s_len * (1.0 + unit.nodes[k]), 1.0 / mu));
    return scale * sum;
  };

  DensityEstimate out;
  double cell_value = 0.0;
  double cell_error = 0.0;
  int n = opts.jacobi_nodes;
  bool accepted = false;
  for (int attempt = 0; attempt < 200; ++attempt) {
    const double whole = jacobi_cell(n, eps);
    const Estimate upper_half = adaptive(full, 0.5 * eps, eps, opts.rel_tol);
    const double halves = jacobi_cell(n, 0.5 * eps) + upper_half.value;
    const double diff = std::abs(whole - halves);
    if (diff <= std::max(opts.rel_tol * std::abs(halves), opts.abs_tol) || eps < 1e-280) {
      cell_value = halves;
      cell_error = diff + upper_half.error;
      accepted = true;
      break;
    }
    if (2 * n <= opts.max_jacobi_nodes) {
      n *= 2;
    } else {
      eps /= 8.0;
      n = opts.jacobi_nodes;
    }
  }
  if (!accepted) {
    cell_value = jacobi_cell(n, eps);
  }
  out.singular_cell = eps;
  out.jacobi_nodes = n;

  // Geometric pieces from eps up to r_max, merged with requested breakpoints.
  std::vector<double> cuts;
  for (double c = eps; c < opts.r_max; c *= 4.0) cuts.push_back(c);
  for (double b : opts.breakpoints)
    if (b > eps && b < opts.r_max) cuts.push_back(b);
  if (t > 0.0) {
    for (double m : {1.0, 4.0, 16.0, 64.0})
      if (m / t > eps && m / t < opts.r_max) cuts.push_back(m / t);
  }
  cuts.push_back(opts.r_max);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double value = cell_value;
  double error = cell_error;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Estimate piece = adaptive(full, cuts[i], cuts[i + 1], opts.rel_tol);
    value += piece.value;
    error += piece.error;
  }
  out.value = value;
  out.error = error;
  return out;
}

}  // namespace fracmix::quadrature
