#pragma once

#include <stdexcept>
#include <string>

namespace srrw {

// Base of every error thrown by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A size parameter (L, d, m, |G|) is outside the supported range.
class size_error : public error {
 public:
  using error::error;
};

// A model parameter (alpha, probabilities, n) is invalid.
class parameter_error : public error {
 public:
  using error::error;
};

// The requested exact or exhaustive computation exceeds a hard cap.
class capacity_error : public error {
 public:
  using error::error;
};

// The input is outside the mathematical domain of the operation.
class domain_error : public error {
 public:
  using error::error;
};

// A caller broke an argument contract (e.g. a missing spin).
class contract_error : public error {
 public:
  using error::error;
};

// The computation is out of scope for this input (e.g. general eigensolver on a big group).
class unsupported_error : public error {
 public:
  using error::error;
};

// Assumption violated: P_mu is not irreducible and aperiodic.
class reducible_error : public error {
 public:
  using error::error;
};

inline void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw parameter_error("alpha must lie in [0,1), got " + std::to_string(alpha));
  }
}

}  // namespace srrw
