#include "linkfinger/grasp.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "linkfinger/error.hpp"

namespace linkfinger::finger {

namespace {

double CappedForce(const assist::ReferenceRegistry& registry, const ForceContext& context) {
  const double force = StaticTipForce(context.tendon, context.geometry, context.finger,
                                      context.theta1, context.tension);
  return std::min(force, registry.value("pinch_force_max_n"));
}

GraspReport Assess(const CylinderObject& cylinder, const assist::ReferenceRegistry& registry,
                   const ForceContext& context) {
  if (!(cylinder.diameter > 0.0)) {
    throw Error(ErrorKind::kOutOfRange,
                fmt::format("cylinder diameter must be positive (got {})", cylinder.diameter));
  }
  const double lo = registry.value("cylinder_diameter_min_mm");
  const double hi = registry.value("cylinder_diameter_max_mm");
  GraspReport report;
  report.margin = std::min(cylinder.diameter - lo, hi - cylinder.diameter);
  report.feasible = cylinder.diameter >= lo && cylinder.diameter <= hi;
  if (report.feasible) {
    report.grasp_type = GraspType::kCylindrical;
    report.predicted_force = CappedForce(registry, context);
    report.notes = fmt::format("diameter {} mm within [{}, {}] mm", cylinder.diameter, lo, hi);
  } else {
    report.notes = fmt::format("diameter {} mm outside [{}, {}] mm", cylinder.diameter, lo, hi);
  }
  return report;
}

GraspReport Assess(const FlatObject& flat, const assist::ReferenceRegistry& registry,
                   const ForceContext& context) {
  if (!(flat.thickness > 0.0)) {
    throw Error(ErrorKind::kOutOfRange,
                fmt::format("flat object thickness must be positive (got {})", flat.thickness));
  }
  const double cap = registry.value("pinch_force_max_n");
  const double force = CappedForce(registry, context);
  GraspReport report;
  report.feasible = force > 0.0;
  report.margin = force / cap;
  if (report.feasible) {
    report.grasp_type = GraspType::kPinch;
    report.predicted_force = force;
    report.notes = fmt::format("pinch at {:.3f} N (published maximum {} N)", force, cap);
  } else {
    report.notes = "tendon cannot overcome the return spring at this tension";
  }
  return report;
}

}  // namespace

const char* ToString(GraspType type) {
  switch (type) {
    case GraspType::kPinch:
      return "pinch";
    case GraspType::kCylindrical:
      return "cylindrical";
    case GraspType::kInfeasible:
      return "infeasible";
  }
  return "unknown";
}

GraspReport AssessGrasp(const GraspObject& object, const assist::ReferenceRegistry& registry,
                        const ForceContext& context) {
  return std::visit([&](const auto& shape) { return Assess(shape, registry, context); }, object);
}

}  // namespace linkfinger::finger
