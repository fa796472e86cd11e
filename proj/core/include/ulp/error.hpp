#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ulp {

/// Broad failure classes. The CLI maps each to its own exit code.
enum class ErrorKind {
  ParameterDomain,   // numeric argument outside its valid range
  Config,            // inconsistent or unknown configuration
  Parse,             // malformed trace / config / packet bytes
  Io,                // filesystem failure
  Input,             // structurally invalid input to an operation
  InsufficientData,  // not enough samples to estimate a statistic
  DegenerateChain,   // Markov chain without a unique stationary law
  EncodingRange,     // value does not fit its wire field
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ulp
