#pragma once

#include <stdexcept>
#include <string>

namespace revmine {

// Malformed input data: wrong column count, non-binary label cell, bad config.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structurally valid data that violates a corpus invariant (duplicate ids,
// all-zero label rows).
struct IntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad argument to an operation (n > pool size, empty training set, ...).
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Lookup of something that does not exist (unknown app, missing model file).
struct NotFoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem failure, always carries the offending path in the message.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Network-level failure after retries are exhausted.
struct TransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite values encountered during numeric computation.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace revmine
