#pragma once

#include <stdexcept>
#include <string>

namespace gaptrack {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad inputs: contract violations, malformed records, out-of-range
// parameters, series too short to analyze. Maps to exit code 1.
class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Filesystem trouble: unreadable input, unwritable output. Exit code 2.
class IoError : public Error {
public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

// A result violated one of our own invariants. Exit code 3.
class InternalError : public Error {
public:
  explicit InternalError(const std::string& msg) : Error(msg) {}
};

}  // namespace gaptrack
