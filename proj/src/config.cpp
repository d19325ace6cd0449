#include "linkfinger/config.hpp"

#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "linkfinger/error.hpp"

namespace linkfinger {

namespace {

using Json = nlohmann::json;

const std::set<std::string>& GeometryKeys() {
  static const std::set<std::string> keys = {"v",          "sigma_deg",  "rho_deg",
                                             "theta4_deg", "theta8_deg", "theta1_range_deg"};
  return keys;
}

const std::set<std::string>& FingerKeys() {
  static const std::set<std::string> keys = {"phalanx_mm", "psi_range_deg", "tendon",
                                             "thumb_line_mm", "base_offset_mm"};
  return keys;
}

[[noreturn]] void Invalid(const std::string& message) {
  throw Error(ErrorKind::kInvalidConfig, message);
}

void RejectUnknownKeys(const Json& object, const std::set<std::string>& allowed,
                       const std::set<std::string>& also_allowed, std::string_view where) {
  for (const auto& [key, _] : object.items()) {
    if (!allowed.contains(key) && !also_allowed.contains(key)) {
      Invalid(fmt::format("unknown key '{}' in {}", key, where));
    }
  }
}

double Number(const Json& object, const char* key) {
  if (!object.contains(key)) Invalid(fmt::format("missing key '{}'", key));
  const Json& value = object.at(key);
  if (!value.is_number()) Invalid(fmt::format("'{}' must be a number", key));
  return value.get<double>();
}

template <std::size_t N>
std::array<double, N> ArrayOf(const Json& value, std::string_view key) {
  if (!value.is_array() || value.size() != N) {
    Invalid(fmt::format("'{}' must be an array of {} numbers", key, N));
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!value[i].is_number()) Invalid(fmt::format("'{}'[{}] must be a number", key, i));
    out[i] = value[i].get<double>();
  }
  return out;
}

template <std::size_t N>
std::array<double, N> Numbers(const Json& object, const char* key) {
  if (!object.contains(key)) Invalid(fmt::format("missing key '{}'", key));
  return ArrayOf<N>(object.at(key), key);
}

Json ParseDocument(std::string_view text) {
  try {
    Json doc = Json::parse(text);
    if (!doc.is_object()) Invalid("config must be a JSON object");
    return doc;
  } catch (const Json::parse_error& e) {
    Invalid(fmt::format("config is not valid JSON: {}", e.what()));
  }
}

linkage::LinkageGeometry GeometryFrom(const Json& doc) {
  linkage::LinkageGeometry geometry;
  geometry.v = Numbers<8>(doc, "v");
  geometry.sigma = DegToRad(Number(doc, "sigma_deg"));
  geometry.rho = DegToRad(Number(doc, "rho_deg"));
  geometry.theta4_fixed = doc.contains("theta4_deg") ? DegToRad(Number(doc, "theta4_deg"))
                                                     : std::numbers::pi / 2;
  geometry.theta8_fixed = doc.contains("theta8_deg") ? DegToRad(Number(doc, "theta8_deg"))
                                                     : std::numbers::pi / 2;
  const auto range = Numbers<2>(doc, "theta1_range_deg");
  geometry.theta1_range = {DegToRad(range[0]), DegToRad(range[1])};
  geometry.Validate();
  return geometry;
}

finger::TendonModel TendonFrom(const Json& object) {
  static const std::set<std::string> keys = {"kind", "arms_mm", "spring_nmm_per_rad",
                                             "preload_nmm", "max_tension_n"};
  if (!object.is_object()) Invalid("'tendon' must be an object");
  RejectUnknownKeys(object, keys, {}, "tendon");
  finger::TendonModel tendon;
  if (!object.contains("kind") || !object["kind"].is_string()) {
    Invalid("tendon 'kind' must be \"single\" or \"double\"");
  }
  const std::string kind = object["kind"].get<std::string>();
  if (kind == "single") {
    tendon.kind = finger::TendonKind::kSingle;
  } else if (kind == "double") {
    tendon.kind = finger::TendonKind::kDouble;
  } else {
    Invalid(fmt::format("tendon kind '{}' is neither single nor double", kind));
  }
  tendon.moment_arms = Numbers<3>(object, "arms_mm");
  tendon.spring_stiffness = Number(object, "spring_nmm_per_rad");
  tendon.spring_preload = Number(object, "preload_nmm");
  tendon.max_tension = Number(object, "max_tension_n");
  tendon.Validate();
  return tendon;
}

}  // namespace

const finger::FingerGeometry& GripperConfig::RequireFinger() const {
  if (!finger) Invalid("config lacks 'phalanx_mm'/'psi_range_deg'");
  return *finger;
}

const finger::TendonModel& GripperConfig::RequireTendon() const {
  if (!tendon) Invalid("config lacks 'tendon'");
  return *tendon;
}

const finger::Segment2& GripperConfig::RequireThumbLine() const {
  if (!thumb_line) Invalid("config lacks 'thumb_line_mm'");
  return *thumb_line;
}

linkage::LinkageGeometry ParseGeometryJson(std::string_view text) {
  const Json doc = ParseDocument(text);
  RejectUnknownKeys(doc, GeometryKeys(), {}, "geometry");
  return GeometryFrom(doc);
}

GripperConfig ParseGripperConfig(std::string_view text) {
  const Json doc = ParseDocument(text);
  RejectUnknownKeys(doc, GeometryKeys(), FingerKeys(), "config");
  GripperConfig config;
  config.linkage = GeometryFrom(doc);
  config.sha256 = Sha256Hex(text);

  const bool has_phalanx = doc.contains("phalanx_mm");
  const bool has_psi = doc.contains("psi_range_deg");
  if (has_phalanx != has_psi) Invalid("'phalanx_mm' and 'psi_range_deg' go together");
  if (has_phalanx) {
    finger::FingerGeometry finger;
    finger.phalanx = Numbers<3>(doc, "phalanx_mm");
    const auto psi = Numbers<2>(doc, "psi_range_deg");
    finger.orientation_range = {DegToRad(psi[0]), DegToRad(psi[1])};
    if (doc.contains("base_offset_mm")) {
      const auto offset = Numbers<2>(doc, "base_offset_mm");
      finger.base_offset = {offset[0], offset[1]};
    }
    finger.Validate();
    config.finger = finger;
  } else if (doc.contains("base_offset_mm")) {
    Invalid("'base_offset_mm' requires 'phalanx_mm'");
  }
  if (doc.contains("tendon")) config.tendon = TendonFrom(doc["tendon"]);
  if (doc.contains("thumb_line_mm")) {
    const Json& line = doc["thumb_line_mm"];
    if (!line.is_array() || line.size() != 2) {
      Invalid("'thumb_line_mm' must hold two [x, y] points");
    }
    const auto a = ArrayOf<2>(line[0], "thumb_line_mm[0]");
    const auto b = ArrayOf<2>(line[1], "thumb_line_mm[1]");
    config.thumb_line = finger::Segment2{{a[0], a[1]}, {b[0], b[1]}};
  }
  return config;
}

GripperConfig LoadGripperConfig(const std::filesystem::path& path) {
  return ParseGripperConfig(ReadFile(path));
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, fmt::format("cannot read '{}'", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::string Sha256Hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::kIo, "SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

double DegToRad(double degrees) { return degrees * std::numbers::pi / 180.0; }
double RadToDeg(double radians) { return radians * 180.0 / std::numbers::pi; }

}  // namespace linkfinger
