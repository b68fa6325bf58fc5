#pragma once

#include <stdexcept>
#include <string>

namespace netdyn {

/// Base of every exception thrown by the library. The message is prefixed
/// with the module that raised it, e.g. "graph: self-loop on node 'a'".
class Error : public std::runtime_error {
 public:
  Error(const std::string& module, const std::string& message)
      : std::runtime_error(module + ": " + message), module_(module) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Contract violations caused by the caller's input (CLI exit code 2).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Failures of a numerical routine on otherwise valid input (CLI exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class DuplicateEdgeError : public InputError {
 public:
  using InputError::InputError;
};

class SelfLoopError : public InputError {
 public:
  using InputError::InputError;
};

class SignedGraphError : public InputError {
 public:
  using InputError::InputError;
};

class ZeroDegreeError : public InputError {
 public:
  using InputError::InputError;
};

class DisconnectedGraphError : public InputError {
 public:
  using InputError::InputError;
};

class SizeMismatchError : public InputError {
 public:
  using InputError::InputError;
};

class NonSymmetricError : public InputError {
 public:
  using InputError::InputError;
};

class UnbalancedGraphError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace netdyn
