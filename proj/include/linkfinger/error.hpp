#pragma once

#include <stdexcept>
#include <string>

namespace linkfinger {

enum class ErrorKind {
  kDegenerateGeometry,
  kNoClosure,
  kOutOfRange,
  kRuleViolation,
  kUnknownRegion,
  kInvalidConfig,
  kIo,
};

const char* ToString(ErrorKind kind);

// Domain errors (everything except kInvalidConfig and kIo) describe a
// mechanism or data state the caller asked about; the CLI maps them to exit
// status 1. Config and IO problems map to exit status 2.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, int loop = 0)
      : std::runtime_error(what), kind_(kind), loop_(loop) {}

  ErrorKind kind() const { return kind_; }
  // Loop (1 or 2) that failed to close or degenerated; 0 when not loop related.
  int loop() const { return loop_; }
  bool is_domain_error() const {
    return kind_ != ErrorKind::kInvalidConfig && kind_ != ErrorKind::kIo;
  }

 private:
  ErrorKind kind_;
  int loop_;
};

}  // namespace linkfinger
