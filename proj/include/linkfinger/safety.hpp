#pragma once

#include <string_view>

#include "linkfinger/registry.hpp"

namespace linkfinger::assist {

enum class ContactRegion { kThighKnee };

// Throws Error(kUnknownRegion) for anything but "thigh_knee".
ContactRegion ParseContactRegion(std::string_view name);

struct SafetyVerdict {
  bool pass = false;
  double applied_limit = 0.0;  // N
  double measured = 0.0;       // N
  double margin_ratio = 0.0;   // limit / measured; +inf for zero force
};

// Quasi-static contact check against the registry limit; the limit itself
// is admissible ("not exceed").
SafetyVerdict IsoContactCheck(double force, ContactRegion region,
                              const ReferenceRegistry& registry);

struct ClearanceResult {
  double per_side_clearance = 0.0;  // mm
  bool fits = false;
};

ClearanceResult ClearanceCheck(double space_width, double body_width, double device_width);

struct StrokeResult {
  bool pass = false;
  double slack = 0.0;  // mm
};

StrokeResult StrokeCheck(double required_travel, double available_extension);

}  // namespace linkfinger::assist
