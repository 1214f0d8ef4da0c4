#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace fracmix::fraccalc {

/// Uniform time grid t_start = t_0 < t_1 < ... < t_N = t_end. The Caputo
/// history starts at t_start.
class TimeGrid {
 public:
  TimeGrid(double t_start, double t_end, std::size_t n_steps);

  /// Grid on [0, t_end] with step as close to `tau` as divides t_end evenly.
  static TimeGrid from_step(double t_end, double tau);

  double t_start() const { return points_.front(); }
  double t_end() const { return points_.back(); }
  std::size_t n_steps() const { return points_.size() - 1; }
  std::size_t size() const { return points_.size(); }
  double step() const { return step_; }
  double operator[](std::size_t i) const { return points_[i]; }
  const std::vector<double>& points() const { return points_; }

 private:
  std::vector<double> points_;
  double step_;
};

/// L1 weights b_k = ((k+1)^{1-a} - k^{1-a}) tau^{-a} / Gamma(2-a), k = 0..n-1.
class L1Weights {
 public:
  L1Weights(double alpha, double tau, std::size_t n);

  double alpha() const { return alpha_; }
  double tau() const { return tau_; }
  std::size_t size() const { return b_.size(); }
  double operator[](std::size_t k) const { return b_[k]; }
  std::span<const double> values() const { return b_; }
  /// reversed()[m] = b_{n-1-m}; lets history sums run over contiguous memory.
  const Eigen::VectorXd& reversed() const { return reversed_; }

 private:
  double alpha_;
  double tau_;
  std::vector<double> b_;
  Eigen::VectorXd reversed_;
};

/// Time-dependent scalar coefficient, remembering whether it is constant.
class Coefficient {
 public:
  Coefficient() : constant_(0.0) {}
  static Coefficient constant(double value);
  static Coefficient function(std::function<double(double)> fn);

  double operator()(double t) const { return constant_ ? *constant_ : fn_(t); }
  bool is_constant() const { return constant_.has_value(); }
  std::optional<double> constant_value() const { return constant_; }

 private:
  std::function<double(double)> fn_;
  std::optional<double> constant_;
};

struct OrderTerm {
  double alpha;
  Coefficient q;
};

/// Fractional part sum_j q_j(t) d^{alpha_j}/dt^{alpha_j} of the mixed-order
/// operator; the first-order derivative is implicit.
struct OrderSpec {
  std::vector<OrderTerm> terms;
  double q_lower = 0.0;
  double q_upper = std::numeric_limits<double>::infinity();

  static OrderSpec single(double alpha, Coefficient q, double q_lower, double q_upper);
  static OrderSpec single_constant(double alpha, double q);

  /// Orders strictly increasing in (0,1); q_lower <= q_upper.
  void validate() const;
  /// validate() plus every q_j sampled on the grid lies in [q_lower, q_upper].
  void validate_on(const TimeGrid& grid) const;

  bool constant_coefficients() const;
  /// Smallest order, or 1 when there are no fractional terms.
  double lowest_order() const;
};

/// Running record of first differences d_n = y_n - y_{n-1} for L1 steppers.
/// Column n of the store holds d_n (column 0 is unused).
class L1Memory {
 public:
  L1Memory(Eigen::Index dim, std::size_t n_steps);

  void push(const Eigen::Ref<const Eigen::VectorXd>& diff);
  void push(double diff);
  std::size_t count() const { return count_; }

  /// sum_{k=1}^{n-1} b_k d_{n-k} with n = count() + 1, i.e. the part of the
  /// L1 sum at the next step that does not involve the unknown.
  Eigen::VectorXd history(const L1Weights& w) const;
  double scalar_history(const L1Weights& w) const;

 private:
  Eigen::MatrixXd diffs_;
  std::size_t count_ = 0;
};

/// L1 approximation of the Caputo derivative at every grid node. Entry 0 is
/// zero (the derivative at the start of the history).
std::vector<double> caputo_l1(std::span<const double> values, double alpha, const TimeGrid& grid);

/// Same for vector-valued sequences; column n is the state at t_n.
Eigen::MatrixXd caputo_l1(const Eigen::MatrixXd& states, double alpha, const TimeGrid& grid);

/// Product-trapezoid Riemann-Liouville integral J^gamma at every node.
std::vector<double> rl_integral(std::span<const double> values, double gamma, const TimeGrid& grid);

/// <y_n, D^a y_n> - |y_n| D^a |y_n| with both derivatives by caputo_l1.
std::vector<double> coercivity_gap(const Eigen::MatrixXd& states, double alpha, const TimeGrid& grid);

/// sum_j q_j(t_n) D^{alpha_j} y(t_n).
std::vector<double> multi_term_apply(std::span<const double> values, const OrderSpec& spec,
                                     const TimeGrid& grid);
Eigen::MatrixXd multi_term_apply(const Eigen::MatrixXd& states, const OrderSpec& spec, const TimeGrid& grid);

}  // namespace fracmix::fraccalc
