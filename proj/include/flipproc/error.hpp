#pragma once

#include <stdexcept>
#include <string>

namespace flipproc {

// Malformed input: bad files, out-of-range codes, wrong orders.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured enumeration or memory limit would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Numerical integration left the admissible region.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal consistency check failed (e.g. no witness construction applies).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace flipproc
