#pragma once

#include <stdexcept>
#include <string>

namespace exo {

// Bad input: schema violations, broken invariants, malformed files.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Geometric failure of the inverse kinematics (target out of reach etc).
class KinematicsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A gait cannot be sampled or optimized (non-monotone time, empty box...).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace exo
