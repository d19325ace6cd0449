#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "linkfinger/finger.hpp"
#include "linkfinger/linkage.hpp"

namespace linkfinger {

// Geometry document:
//   {"v": [8 x mm], "sigma_deg", "rho_deg", "theta4_deg", "theta8_deg",
//    "theta1_range_deg": [lo, hi]}
// The gripper document adds "phalanx_mm", "psi_range_deg", "tendon",
// "thumb_line_mm" and optionally "base_offset_mm". Unknown keys are errors.
struct GripperConfig {
  linkage::LinkageGeometry linkage;
  std::optional<finger::FingerGeometry> finger;
  std::optional<finger::TendonModel> tendon;
  std::optional<finger::Segment2> thumb_line;
  std::string sha256;  // of the document bytes

  const finger::FingerGeometry& RequireFinger() const;
  const finger::TendonModel& RequireTendon() const;
  const finger::Segment2& RequireThumbLine() const;
};

// All parse failures throw Error(kInvalidConfig).
linkage::LinkageGeometry ParseGeometryJson(std::string_view text);
GripperConfig ParseGripperConfig(std::string_view text);
// Throws Error(kIo) if the file cannot be read.
GripperConfig LoadGripperConfig(const std::filesystem::path& path);

std::string Sha256Hex(std::string_view bytes);
std::string ReadFile(const std::filesystem::path& path);

double DegToRad(double degrees);
double RadToDeg(double radians);

}  // namespace linkfinger
