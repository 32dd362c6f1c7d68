#pragma once

#include <stdexcept>
#include <string>

namespace agcalc {

// Caller broke an operation contract (mismatched variable sets, window too
// small for the requested output, index out of range).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Mathematical precondition of an algorithm is not met, e.g. o(H) < 2.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed textual or JSON input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation exceeded the configured term-count ceiling.
class ResourceGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace agcalc
