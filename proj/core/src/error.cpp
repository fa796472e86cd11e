#include "ulp/error.hpp"

namespace ulp {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ParameterDomain: return "parameter-domain";
    case ErrorKind::Config: return "config";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
    case ErrorKind::Input: return "input";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::DegenerateChain: return "degenerate-chain";
    case ErrorKind::EncodingRange: return "encoding-range";
  }
  return "unknown";
}

}  // namespace ulp
