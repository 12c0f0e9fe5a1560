#pragma once

#include <stdexcept>
#include <string>

namespace creaturekit {

/// Process exit status associated with each error family.
enum class ErrorCode : int {
  property_failure = 1,
  invalid_input = 2,
  cap_exceeded = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Malformed or out-of-range input.
class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(ErrorCode::invalid_input, what) {}
};

/// A combinatorial search would exceed the configured size caps.
class CapExceeded : public Error {
 public:
  explicit CapExceeded(const std::string& what) : Error(ErrorCode::cap_exceeded, what) {}
};

/// A checked mathematical property did not hold.
class PropertyFailure : public Error {
 public:
  explicit PropertyFailure(const std::string& what) : Error(ErrorCode::property_failure, what) {}
};

/// Functionals with no finite representation (ultrafilter limits and the like).
class UnsupportedFunctional : public InvalidInput {
 public:
  explicit UnsupportedFunctional(const std::string& what) : InvalidInput(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidInput(what);
}

}  // namespace creaturekit
