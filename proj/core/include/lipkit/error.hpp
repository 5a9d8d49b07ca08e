#pragma once

#include <stdexcept>
#include <string>

namespace lipkit {

// Failure categories carried by every exception the library throws.
// The CLI maps these onto process exit codes, so the category is part of
// the public contract, not just diagnostics.
enum class ErrorKind {
  structural,         // shape or space mismatch, malformed composite
  domain,             // scalar argument outside its admissible range
  unsupported,        // operation undefined for this handle/norm combination
  degenerate_sample,  // sampler produced no usable pairs
  inconsistent_pair,  // constraint with s = t = 0 but a positive gap
  not_verifiable,     // no admissible constants below 1 on the frontier
  degenerate_norm,    // partial-sum norm built over a zero atom
  solver_failure,     // iteration missed the target residual
  parse,              // scenario / JSON validation
  internal,           // invariant the library promised to maintain broke
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::structural: return "structural";
    case ErrorKind::domain: return "domain";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::degenerate_sample: return "degenerate-sample";
    case ErrorKind::inconsistent_pair: return "inconsistent-pair";
    case ErrorKind::not_verifiable: return "not-verifiable";
    case ErrorKind::degenerate_norm: return "degenerate-norm";
    case ErrorKind::solver_failure: return "solver-failure";
    case ErrorKind::parse: return "parse";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

}  // namespace lipkit
