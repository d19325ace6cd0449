#include "linkfinger/safety.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "linkfinger/error.hpp"

namespace linkfinger::assist {

ContactRegion ParseContactRegion(std::string_view name) {
  if (name == "thigh_knee") return ContactRegion::kThighKnee;
  throw Error(ErrorKind::kUnknownRegion, fmt::format("unknown contact region '{}'", name));
}

SafetyVerdict IsoContactCheck(double force, ContactRegion region,
                              const ReferenceRegistry& registry) {
  if (!(force >= 0.0) || !std::isfinite(force)) {
    throw Error(ErrorKind::kOutOfRange,
                fmt::format("contact force must be finite and non-negative (got {})", force));
  }
  double limit = 0.0;
  switch (region) {
    case ContactRegion::kThighKnee:
      limit = registry.value("iso_thigh_knee_force_limit_n");
      break;
  }
  SafetyVerdict verdict;
  verdict.applied_limit = limit;
  verdict.measured = force;
  verdict.pass = force <= limit;
  verdict.margin_ratio = force > 0.0 ? limit / force : std::numeric_limits<double>::infinity();
  return verdict;
}

ClearanceResult ClearanceCheck(double space_width, double body_width, double device_width) {
  if (!(space_width > 0.0) || !(body_width > 0.0) || !(device_width > 0.0)) {
    throw Error(ErrorKind::kOutOfRange,
                fmt::format("widths must be positive (space {}, body {}, device {})", space_width,
                            body_width, device_width));
  }
  ClearanceResult result;
  result.per_side_clearance = (space_width - body_width) / 2.0;
  result.fits = device_width <= result.per_side_clearance;
  return result;
}

StrokeResult StrokeCheck(double required_travel, double available_extension) {
  if (!(required_travel >= 0.0) || !(available_extension >= 0.0)) {
    throw Error(ErrorKind::kOutOfRange,
                fmt::format("stroke lengths must be non-negative (required {}, available {})",
                            required_travel, available_extension));
  }
  return StrokeResult{available_extension >= required_travel,
                      available_extension - required_travel};
}

}  // namespace linkfinger::assist
