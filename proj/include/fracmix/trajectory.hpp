#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "fracmix/fraccalc.hpp"

namespace fracmix {

/// Time samples of a scalar or vector state with its discrete L2 norm track.
/// Column n of states() is the state at times()[n]; norms use the inner
/// product weight * sum_i u_i v_i (weight = 1 for scalars).
class Trajectory {
 public:
  static Trajectory scalar(std::vector<double> times, std::span<const double> values);
  static Trajectory scalar(const fraccalc::TimeGrid& grid, std::span<const double> values);
  static Trajectory field(std::vector<double> times, Eigen::MatrixXd states, double weight);
  static Trajectory field(const fraccalc::TimeGrid& grid, Eigen::MatrixXd states, double weight);

  std::size_t size() const { return times_.size(); }
  Eigen::Index dim() const { return states_.rows(); }
  bool is_scalar() const { return states_.rows() == 1; }

  const std::vector<double>& times() const { return times_; }
  const Eigen::MatrixXd& states() const { return states_; }
  Eigen::VectorXd state(std::size_t n) const { return states_.col(static_cast<Eigen::Index>(n)); }
  const std::vector<double>& norms() const { return norms_; }
  double weight() const { return weight_; }

  /// Signed values of a scalar trajectory.
  std::vector<double> values() const;
  double value(std::size_t n) const;

  /// The uniform grid the trajectory was produced on, if any.
  const std::optional<fraccalc::TimeGrid>& grid() const { return grid_; }

 private:
  Trajectory(std::vector<double> times, Eigen::MatrixXd states, double weight);

  std::vector<double> times_;
  Eigen::MatrixXd states_;
  std::vector<double> norms_;
  double weight_ = 1.0;
  std::optional<fraccalc::TimeGrid> grid_;
};

}  // namespace fracmix
