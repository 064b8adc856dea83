#pragma once

#include <stdexcept>
#include <string>

namespace ballheat {

// Malformed arguments: bad sizes, non-positive times, non-unit normals.
struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Arguments outside the domain where a quantity is defined.
struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

// An iteration failed to converge or an evaluator gave up.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The spectral series would need more modes than the budget allows. Callers
// are expected to fall back to the Monte Carlo oracle.
struct small_time_refusal : numeric_error {
  using numeric_error::numeric_error;
};

}  // namespace ballheat
