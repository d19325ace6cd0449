#pragma once

#include <string>
#include <variant>

#include "linkfinger/finger.hpp"
#include "linkfinger/registry.hpp"

namespace linkfinger::finger {

struct CylinderObject {
  double diameter = 0.0;  // mm
};

struct FlatObject {
  double thickness = 0.0;  // mm
};

using GraspObject = std::variant<CylinderObject, FlatObject>;

// Configuration and actuation used to predict the closing force.
struct ForceContext {
  LinkageGeometry geometry;
  FingerGeometry finger;
  TendonModel tendon;
  double theta1 = 0.0;
  double tension = 0.0;
};

enum class GraspType { kPinch, kCylindrical, kInfeasible };

const char* ToString(GraspType type);

struct GraspReport {
  GraspType grasp_type = GraspType::kInfeasible;
  bool feasible = false;
  double predicted_force = 0.0;  // N; zero when infeasible
  // Cylinders: mm to the nearest diameter bound, negative outside.
  // Flat objects: predicted force as a fraction of the published pinch maximum.
  double margin = 0.0;
  std::string notes;
};

// Cylinders are feasible on the closed registry interval of diameters.
// Flat objects are pinched with the static tip force capped at the published
// pinch maximum; they are feasible whenever that force is positive.
// Throws Error(kOutOfRange) for a non-positive object dimension.
GraspReport AssessGrasp(const GraspObject& object, const assist::ReferenceRegistry& registry,
                        const ForceContext& context);

}  // namespace linkfinger::finger
