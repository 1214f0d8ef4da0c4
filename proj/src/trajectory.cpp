#include "fracmix/trajectory.hpp"

#include <cmath>

#include "fracmix/error.hpp"

namespace fracmix {

Trajectory::Trajectory(std::vector<double> times, Eigen::MatrixXd states, double weight)
    : times_(std::move(times)), states_(std::move(states)), weight_(weight) {
  detail::require(static_cast<Eigen::Index>(times_.size()) == states_.cols(),
                  "Trajectory: one state per time is required");
  detail::require(weight_ > 0.0, "Trajectory: norm weight must be positive");
  norms_.resize(times_.size());
  for (std::size_t n = 0; n < times_.size(); ++n)
    norms_[n] = std::sqrt(weight_) * states_.col(static_cast<Eigen::Index>(n)).norm();
}

Trajectory Trajectory::scalar(std::vector<double> times, std::span<const double> values) {
  detail::require(times.size() == values.size(), "Trajectory: one value per time is required");
  Eigen::MatrixXd states(1, static_cast<Eigen::Index>(values.size()));
  for (std::size_t n = 0; n < values.size(); ++n) states(0, static_cast<Eigen::Index>(n)) = values[n];
  return Trajectory(std::move(times), std::move(states), 1.0);
}

Trajectory Trajectory::scalar(const fraccalc::TimeGrid& grid, std::span<const double> values) {
  Trajectory t = scalar(grid.points(), values);
  t.grid_ = grid;
  return t;
}

Trajectory Trajectory::field(std::vector<double> times, Eigen::MatrixXd states, double weight) {
  return Trajectory(std::move(times), std::move(states), weight);
}

Trajectory Trajectory::field(const fraccalc::TimeGrid& grid, Eigen::MatrixXd states, double weight) {
  Trajectory t(grid.points(), std::move(states), weight);
  t.grid_ = grid;
  return t;
}

std::vector<double> Trajectory::values() const {
  detail::require(is_scalar(), "Trajectory: values() needs a scalar trajectory");
  return std::vector<double>(states_.data(), states_.data() + states_.size());
}

double Trajectory::value(std::size_t n) const {
  detail::require(is_scalar(), "Trajectory: value() needs a scalar trajectory");
  return states_(0, static_cast<Eigen::Index>(n));
}

}  // namespace fracmix
