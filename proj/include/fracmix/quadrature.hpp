#pragma once

#include <functional>
#include <vector>

namespace fracmix::quadrature {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^a (1+x)^b, a, b > -1,
// via Golub-Welsch.
Rule gauss_jacobi(int n, double a, double b);

// The same rule mapped onto (0, len] for the weight r^p.
Rule gauss_jacobi_left_singular(int n, double p, double len);

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

// Adaptive Gauss-Kronrod (31 point) on [a, b].
Estimate adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                  unsigned max_depth = 15);

struct DensityOptions {
  double split = 1.0;            // initial singular cell (0, split]
  double r_max = 100.0;          // truncation radius
  double rel_tol = 1e-11;        // per-piece relative tolerance
  double abs_tol = 0.0;
  double smooth_power = 1.0;      // g is smooth as a function of r^smooth_power near 0
  int jacobi_nodes = 64;
  int max_jacobi_nodes = 256;
  std::vector<double> breakpoints;  // interior points where the density varies fast
};

struct DensityEstimate {
  double value = 0.0;
  double error = 0.0;          // summed local error estimates
  double singular_cell = 0.0;  // accepted Gauss-Jacobi cell length
  int jacobi_nodes = 0;
};

// integral_0^{r_max} e^{-r t} r^p g(r) dr for p > -1 and g regular on (0, r_max].
// The cell next to the origin uses Gauss-Jacobi with the weight r^p, taken in
// the variable s = r^smooth_power so that g stays smooth there; the node
// count is doubled, then the cell shrunk, until the full-cell estimate agrees
// with the half-cell-plus-adaptive estimate. The remainder is integrated
// adaptively on geometrically spaced pieces.
DensityEstimate integrate_power_weighted(const std::function<double(double)>& g, double p, double t,
                                         const DensityOptions& opts);

}  // namespace fracmix::quadrature
