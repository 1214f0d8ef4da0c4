#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fracmix/fraccalc.hpp"
#include "fracmix/trajectory.hpp"

namespace fracmix::pde1d {

/// Dirichlet discretization of A = -d/dx (a(x) d/dx) on (0, L) in flux form.
/// The discrete inner product is h * sum_i u_i v_i; eigenvectors are
/// orthonormal in it.
struct EllipticOp1D {
  double length = 0.0;
  std::size_t n_x = 0;
  double h = 0.0;
  double nu = 0.0;
  std::vector<double> x;      // interior nodes i h, i = 1..n_x
  std::vector<double> a_mid;  // a((i + 1/2) h), i = 0..n_x
  Eigen::VectorXd diag;       // stiffness diagonal
  Eigen::VectorXd off;        // stiffness sub/super diagonal, length n_x - 1
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // column k is phi_{k+1}

  Eigen::VectorXd apply(const Eigen::VectorXd& u) const;
  double inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const { return h * u.dot(v); }
  double norm(const Eigen::VectorXd& u) const;
  /// <g, phi_k> for every k.
  Eigen::VectorXd project(const Eigen::VectorXd& g) const;
  /// sum_k d_k phi_k.
  Eigen::VectorXd synthesize(const Eigen::VectorXd& d) const;
  /// Samples a function of x on the interior nodes.
  Eigen::VectorXd sample(const std::function<double(double)>& fn) const;
};

EllipticOp1D build_operator(double length, std::size_t n_x, const std::function<double(double)>& a, double nu);

/// e^{-tA} g by eigen-expansion.
Eigen::VectorXd semigroup_apply(const EllipticOp1D& op, double t, const Eigen::VectorXd& g);

using Field = std::function<double(double, double)>;  // (x, t)

/// Reaction coefficient c(x, t), remembering whether it is a constant.
class Reaction {
 public:
  Reaction() : constant_(0.0) {}
  static Reaction constant(double c);
  static Reaction field(Field fn);

  double operator()(double x, double t) const { return constant_ ? *constant_ : fn_(x, t); }
  std::optional<double> constant_value() const { return constant_; }

 private:
  Field fn_;
  std::optional<double> constant_;
};

struct MixedProblem {
  EllipticOp1D op;
  fraccalc::OrderSpec spec;
  Reaction c;
  bool c_nonpositive = true;  // declared sign of c, checked on every grid used
  Field f;                    // empty means no source
  Eigen::VectorXd u0;
  double horizon = 1.0;
  bool decay_mode = false;  // requires f absent and c <= 0

  void validate() const;
  /// validate() plus coefficient checks on the space-time grid.
  void validate_on(const fraccalc::TimeGrid& grid) const;
};

/// Implicit mixed-order L1 stepping with a tridiagonal solve per step.
Trajectory solve_mixed_l1(const MixedProblem& problem, const fraccalc::TimeGrid& grid);

struct ModalOptions {
  /// Step of the scalar L1 solves used when there is more than one order.
  double multi_term_tau = 1.0 / 2048.0;
};

/// Eigen-expansion solution for constant q and constant c <= 0, f absent.
Trajectory modal_oracle(const MixedProblem& problem, std::span<const double> times, const ModalOptions& opts = {});

/// F(t_n) = e^{-t_n A} u0 + int_0^{t_n} e^{-(t_n - s) A} f(s) ds, modewise with
/// exact exponential cell weights against piecewise-linear f.
Trajectory duhamel_source(const EllipticOp1D& op, const Eigen::VectorXd& u0, const Field& f,
                          const fraccalc::TimeGrid& grid);

struct PicardReport {
  std::size_t iterations = 0;
  std::vector<double> increments;  // sup_n |u^{(m+1)} - u^{(m)}|
  std::vector<double> factors;     // ratios of successive increments
  double residual = 0.0;           // sup_n |u - F - K u| of the returned iterate
  bool converged = false;
};

struct PicardResult {
  Trajectory solution;
  PicardReport report;
};

/// u^{(m+1)} = F + K u^{(m)} from u^{(0)} = F. Throws NonConvergence after
/// max_iter iterations when throw_on_failure is set; otherwise the report
/// says converged = false.
PicardResult picard_solve(const MixedProblem& problem, const fraccalc::TimeGrid& grid, std::size_t max_iter,
                          double tol, bool throw_on_failure = true);

struct DecayOptions {
  double stepper_tau = 1.0 / 16.0;
  double stepper_horizon_cap = 200.0;
};

struct DecayRun {
  Trajectory trajectory;      // states at the requested times
  std::vector<double> ratio;  // |u(t)| t^alpha / |u0|
  double alpha = 0.5;         // lowest order, the predicted rate
  std::string route;          // "modal" or "stepper"
};

/// Norm track at log-spaced times for the decay law. Constant single-order
/// problems go through modal_oracle, others through solve_mixed_l1.
DecayRun decay_run(const MixedProblem& problem, std::span<const double> t_points, const DecayOptions& opts = {});

}  // namespace fracmix::pde1d
