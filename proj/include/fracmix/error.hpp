#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracmix {

enum class ErrorCode {
  validation = 1,
  evaluation = 2,
  truncation = 3,
  non_convergence = 4,
  singular = 5,
  io = 6,
};

// Base of every exception thrown by the library. The C API maps code() onto
// its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorCode::validation, what) {}
};

// Mittag-Leffler evaluation did not reach its tolerance in the selected regime.
class EvaluationFailure : public Error {
 public:
  EvaluationFailure(const std::string& regime, std::complex<double> z, const std::string& detail)
      : Error(ErrorCode::evaluation, "evaluation failed in regime '" + regime + "' at z=(" +
                                         std::to_string(z.real()) + "," + std::to_string(z.imag()) +
                                         "): " + detail),
        regime_(regime),
        z_(z) {}
  const std::string& regime() const noexcept { return regime_; }
  std::complex<double> z() const noexcept { return z_; }

 private:
  std::string regime_;
  std::complex<double> z_;
};

// Certified tail of the spectral integral exceeds the error budget.
class TruncationFailure : public Error {
 public:
  TruncationFailure(double tail_bound, double suggested_r_max)
      : Error(ErrorCode::truncation, "spectral tail bound " + std::to_string(tail_bound) +
                                         " exceeds budget; increase r_max to at least " +
                                         std::to_string(suggested_r_max)),
        tail_bound_(tail_bound),
        suggested_r_max_(suggested_r_max) {}
  double tail_bound() const noexcept { return tail_bound_; }
  double suggested_r_max() const noexcept { return suggested_r_max_; }

 private:
  double tail_bound_;
  double suggested_r_max_;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double last_factor)
      : Error(ErrorCode::non_convergence, what), last_factor_(last_factor) {}
  double last_factor() const noexcept { return last_factor_; }

 private:
  double last_factor_;
};

// Linear solve broke down (non-positive pivot).
class SingularityError : public Error {
 public:
  SingularityError(std::size_t node, double pivot)
      : Error(ErrorCode::singular, "non-positive pivot " + std::to_string(pivot) + " at node " +
                                       std::to_string(node)),
        node_(node) {}
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

// Config or output file could not be read or written.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

namespace detail {
inline void require(bool ok, const char* what) {
  if (!ok) throw ValidationError(what);
}
inline void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}
}  // namespace detail

}  // namespace fracmix
