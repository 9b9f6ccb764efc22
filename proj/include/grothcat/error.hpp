#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace grothcat {

/// Failure categories. The CLI maps these onto its exit codes.
enum class ErrorCode {
  input,               // malformed or inconsistent input data
  parse,               // syntactically invalid input document
  composition,         // endpoints of composed morphisms do not match
  non_stabilization,   // bounded saturation did not stabilize
  infinite_dimension,  // hom-space certificate failed at the maximum bound
  bound,               // a path exceeds the bound of a computed basis
  factorization,       // generator assignment does not respect a relation
  induction,           // vertex map does not induce a functor
  validation,          // functor data violates functoriality
  verification,        // an isomorphism check failed
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::input: return "input error";
    case ErrorCode::parse: return "parse error";
    case ErrorCode::composition: return "composition error";
    case ErrorCode::non_stabilization: return "possibly-infinite category";
    case ErrorCode::infinite_dimension: return "possibly-infinite-dimensional";
    case ErrorCode::bound: return "bound error";
    case ErrorCode::factorization: return "factorization error";
    case ErrorCode::induction: return "induction error";
    case ErrorCode::validation: return "validation error";
    case ErrorCode::verification: return "verification error";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace grothcat
