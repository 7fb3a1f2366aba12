#pragma once

#include <stdexcept>
#include <string>

namespace ngtheta {

// Malformed or unreadable input.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Data that parses but violates a mathematical precondition.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegeneratePlaneError : ValidationError {
  using ValidationError::ValidationError;
};

struct CertificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ngtheta
