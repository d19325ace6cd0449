#include "linkfinger/error.hpp"

namespace linkfinger {

const char* ToString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDegenerateGeometry: return "DegenerateGeometry";
    case ErrorKind::kNoClosure: return "NoClosure";
    case ErrorKind::kOutOfRange: return "OutOfRange";
    case ErrorKind::kRuleViolation: return "RuleViolation";
    case ErrorKind::kUnknownRegion: return "UnknownRegion";
    case ErrorKind::kInvalidConfig: return "InvalidConfig";
    case ErrorKind::kIo: return "IoError";
  }
  return "Unknown";
}

}  // namespace linkfinger
