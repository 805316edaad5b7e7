#pragma once

#include <stdexcept>
#include <string>

namespace mbsadapt {

// Invalid configuration, rate, or CLI input. Messages carry the offending key
// path where one exists.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LayerRangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// The MBS budget handed to the allocator is below the sum of session minima.
class InfeasibleMbsFloor : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class NotIrreducible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A cell-state invariant was broken. Always a bug, never a user error.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mbsadapt
