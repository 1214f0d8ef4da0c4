#include "fracmix/fraccalc.hpp"

#include <cmath>
#include <string>

#include "fracmix/error.hpp"
#include "fracmix/special.hpp"

namespace fracmix::fraccalc {

using detail::require;

TimeGrid::TimeGrid(double t_start, double t_end, std::size_t n_steps) {
  require(std::isfinite(t_start) && std::isfinite(t_end), "TimeGrid: endpoints must be finite");
  require(t_start >= 0.0, "TimeGrid: t_start must be >= 0");
  require(t_end > t_start, "TimeGrid: t_end must exceed t_start");
  require(n_steps >= 1, "TimeGrid: need at least one step");
  step_ = (t_end - t_start) / static_cast<double>(n_steps);
  points_.resize(n_steps + 1);
  for (std::size_t i = 0; i <= n_steps; ++i) points_[i] = t_start + step_ * static_cast<double>(i);
  points_.back() = t_end;
}

TimeGrid TimeGrid::from_step(double t_end, double tau) {
  require(tau > 0.0, "TimeGrid: step must be positive");
  const auto n = static_cast<std::size_t>(std::llround(t_end / tau));
  return TimeGrid(0.0, t_end, n < 1 ? 1 : n);
}

L1Weights::L1Weights(double alpha, double tau, std::size_t n) : alpha_(alpha), tau_(tau) {
  require(alpha > 0.0 && alpha < 1.0, "L1Weights: alpha must lie in (0,1), got " + std::to_string(alpha));
  require(tau > 0.0, "L1Weights: tau must be positive");
  const double scale = std::pow(tau, -alpha) * special::rgamma(2.0 - alpha);
  const double e = 1.0 - alpha;
  b_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double kd = static_cast<double>(k);
    b_[k] = (std::pow(kd + 1.0, e) - std::pow(kd, e)) * scale;
  }
  reversed_.resize(static_cast<Eigen::Index>(n));
  for (std::size_t m = 0; m < n; ++m) reversed_(static_cast<Eigen::Index>(m)) = b_[n - 1 - m];
}

Coefficient Coefficient::constant(double value) {
  Coefficient c;
  c.constant_ = value;
  return c;
}

Coefficient Coefficient::function(std::function<double(double)> fn) {
  require(static_cast<bool>(fn), "Coefficient: empty function");
  Coefficient c;
  c.constant_.reset();
  c.fn_ = std::move(fn);
  return c;
}

OrderSpec OrderSpec::single(double alpha, Coefficient q, double q_lower, double q_upper) {
  OrderSpec spec;
  spec.terms.push_back({alpha, std::move(q)});
  spec.q_lower = q_lower;
  spec.q_upper = q_upper;
  return spec;
}

OrderSpec OrderSpec::single_constant(double alpha, double q) {
  return single(alpha, Coefficient::constant(q), q, q);
}

void OrderSpec::validate() const {
  require(q_lower >= 0.0, "OrderSpec: q_lower must be >= 0");
  require(q_upper >= q_lower, "OrderSpec: q_upper must be >= q_lower");
  double prev = 0.0;
  for (const auto& term : terms) {
    require(term.alpha > 0.0 && term.alpha < 1.0,
            "OrderSpec: orders must lie in (0,1), got " + std::to_string(term.alpha));
    require(term.alpha > prev, "OrderSpec: orders must be strictly increasing");
    prev = term.alpha;
    if (auto c = term.q.constant_value()) {
      require(*c >= q_lower && *c <= q_upper, "OrderSpec: constant q outside [q_lower, q_upper]");
    }
  }
}

void OrderSpec::validate_on(const TimeGrid& grid) const {
  validate();
  for (const auto& term : terms) {
    if (term.q.is_constant()) continue;
    for (double t : grid.points()) {
      const double q = term.q(t);
      require(std::isfinite(q) && q >= q_lower && q <= q_upper,
              "OrderSpec: q(" + std::to_string(t) + ") = " + std::to_string(q) + " outside [q_lower, q_upper]");
    }
  }
}

bool OrderSpec::constant_coefficients() const {
  for (const auto& term : terms)
    if (!term.q.is_constant()) return false;
  return true;
}

double OrderSpec::lowest_order() const { return terms.empty() ? 1.0 : terms.front().alpha; }

L1Memory::L1Memory(Eigen::Index dim, std::size_t n_steps)
    : diffs_(Eigen::MatrixXd::Zero(dim, static_cast<Eigen::Index>(n_steps) + 1)) {}

void L1Memory::push(const Eigen::Ref<const Eigen::VectorXd>& diff) {
  require(count_ + 1 < static_cast<std::size_t>(diffs_.cols()), "L1Memory: capacity exceeded");
  ++count_;
  diffs_.col(static_cast<Eigen::Index>(count_)) = diff;
}

void L1Memory::push(double diff) {
  require(diffs_.rows() == 1, "L1Memory: scalar push on a vector memory");
  require(count_ + 1 < static_cast<std::size_t>(diffs_.cols()), "L1Memory: capacity exceeded");
  ++count_;
  diffs_(0, static_cast<Eigen::Index>(count_)) = diff;
}

Eigen::VectorXd L1Memory::history(const L1Weights& w) const {
  const auto n = static_cast<Eigen::Index>(count_) + 1;
  const auto big_n = static_cast<Eigen::Index>(w.size());
  require(n <= big_n, "L1Memory: weight table too short");
  if (n <= 1) return Eigen::VectorXd::Zero(diffs_.rows());
  return diffs_.middleCols(1, n - 1) * w.reversed().segment(big_n - n, n - 1);
}

double L1Memory::scalar_history(const L1Weights& w) const {
  const auto n = static_cast<Eigen::Index>(count_) + 1;
  const auto big_n = static_cast<Eigen::Index>(w.size());
  require(n <= big_n, "L1Memory: weight table too short");
  if (n <= 1) return 0.0;
  const Eigen::Map<const Eigen::VectorXd> d(diffs_.data() + 1, n - 1);
  return d.dot(w.reversed().segment(big_n - n, n - 1));
}

namespace {

void check_order(double alpha) {
  require(alpha > 0.0 && alpha < 1.0, "caputo_l1: alpha must lie in (0,1), got " + std::to_string(alpha));
}

void check_length(std::size_t n, const TimeGrid& grid) {
  require(n == grid.size(), "sequence length " + std::to_string(n) + " does not match grid size " +
                                std::to_string(grid.size()));
}

}  // namespace

std::vector<double> caputo_l1(std::span<const double> values, double alpha, const TimeGrid& grid) {
  check_order(alpha);
  check_length(values.size(), grid);
  const std::size_t n_steps = grid.n_steps();
  const L1Weights w(alpha, grid.step(), n_steps);
  L1Memory mem(1, n_steps);
  std::vector<double> out(values.size(), 0.0);
  for (std::size_t n = 1; n <= n_steps; ++n) {
    const double d = values[n] - values[n - 1];
    out[n] = w[0] * d + mem.scalar_history(w);
    mem.push(d);
  }
  return out;
}

Eigen::MatrixXd caputo_l1(const Eigen::MatrixXd& states, double alpha, const TimeGrid& grid) {
  check_order(alpha);
  check_length(static_cast<std::size_t>(states.cols()), grid);
  const std::size_t n_steps = grid.n_steps();
  const L1Weights w(alpha, grid.step(), n_steps);
  L1Memory mem(states.rows(), n_steps);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(states.rows(), states.cols());
  for (std::size_t n = 1; n <= n_steps; ++n) {
    const auto col = static_cast<Eigen::Index>(n);
    const Eigen::VectorXd d = states.col(col) - states.col(col - 1);
    out.col(col) = w[0] * d + mem.history(w);
    mem.push(d);
  }
  return out;
}

std::vector<double> rl_integral(std::span<const double> values, double gamma, const TimeGrid& grid) {
  require(gamma > 0.0, "rl_integral: gamma must be positive, got " + std::to_string(gamma));
  check_length(values.size(), grid);
  const std::size_t n_steps = grid.n_steps();
  const double g1 = gamma + 1.0;
  // Exact integrals of the kernel against the hat functions of the grid.
  std::vector<double> pw(n_steps + 2);
  for (std::size_t k = 0; k < pw.size(); ++k) pw[k] = std::pow(static_cast<double>(k), g1);
  const double scale = std::pow(grid.step(), gamma) * special::rgamma(gamma + 2.0);

  std::vector<double> out(values.size(), 0.0);
  for (std::size_t n = 1; n <= n_steps; ++n) {
    const double nd = static_cast<double>(n);
    double sum = (pw[n - 1] - (nd - 1.0 - gamma) * std::pow(nd, gamma)) * values[0];
    for (std::size_t j = 1; j < n; ++j) {
      const std::size_t m = n - j;
      sum += (pw[m + 1] - 2.0 * pw[m] + pw[m - 1]) * values[j];
    }
    sum += values[n];
    out[n] = scale * sum;
  }
  return out;
}

std::vector<double> coercivity_gap(const Eigen::MatrixXd& states, double alpha, const TimeGrid& grid) {
  check_order(alpha);
  check_length(static_cast<std::size_t>(states.cols()), grid);
  const Eigen::MatrixXd dy = caputo_l1(states, alpha, grid);
  std::vector<double> norms(static_cast<std::size_t>(states.cols()));
  for (Eigen::Index n = 0; n < states.cols(); ++n) norms[static_cast<std::size_t>(n)] = states.col(n).norm();
  const std::vector<double> dnorm = caputo_l1(norms, alpha, grid);

  std::vector<double> gap(norms.size(), 0.0);
  for (std::size_t n = 0; n < norms.size(); ++n) {
    const auto col = static_cast<Eigen::Index>(n);
    const double inner = states.col(col).dot(dy.col(col));
    // At a zero state the norm term drops out.
    gap[n] = norms[n] == 0.0 ? inner : inner - norms[n] * dnorm[n];
  }
  return gap;
}

std::vector<double> multi_term_apply(std::span<const double> values, const OrderSpec& spec,
                                     const TimeGrid& grid) {
  spec.validate();
  check_length(values.size(), grid);
  std::vector<double> out(values.size(), 0.0);
  for (const auto& term : spec.terms) {
    const std::vector<double> d = caputo_l1(values, term.alpha, grid);
    for (std::size_t n = 0; n < out.size(); ++n) out[n] += term.q(grid[n]) * d[n];
  }
  return out;
}

Eigen::MatrixXd multi_term_apply(const Eigen::MatrixXd& states, const OrderSpec& spec, const TimeGrid& grid) {
  spec.validate();
  check_length(static_cast<std::size_t>(states.cols()), grid);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(states.rows(), states.cols());
  for (const auto& term : spec.terms) {
    const Eigen::MatrixXd d = caputo_l1(states, term.alpha, grid);
    for (Eigen::Index n = 0; n < out.cols(); ++n) out.col(n) += term.q(grid[static_cast<std::size_t>(n)]) * d.col(n);
  }
  return out;
}

}  // namespace fracmix::fraccalc
