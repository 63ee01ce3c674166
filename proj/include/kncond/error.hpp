#pragma once

#include <stdexcept>
#include <string>

namespace kncond {

// Malformed input: bad dimensions, invalid simplex entries, unparseable text.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A value fell outside the domain of a function or measure.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An optimizer failed to produce a usable answer.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kncond
