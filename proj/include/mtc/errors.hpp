#pragma once

#include <stdexcept>
#include <string>

namespace mtc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user-supplied configuration (estimator parameters, CV setup, manifests).
struct ConfigError : Error {
  using Error::Error;
};

// Malformed or degenerate input data (non-finite samples, constant features).
struct DataError : Error {
  using Error::Error;
};

// Numerical failure (singular matrix after regularization, solver stall).
struct NumericError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace mtc
