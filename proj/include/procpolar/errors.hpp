#pragma once

#include <stdexcept>
#include <string>

namespace procpolar {

/// Malformed input: unparsable instance files, shape mismatches, values
/// outside an operation's domain.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

/// A postcondition the library asserts about its own output failed. Always a
/// defect, never a property of the input.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace procpolar
