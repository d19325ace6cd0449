#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace linkfinger::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitConfigError = 2;

struct RunConfig {
  std::string command;  // analyze|sweep|workspace|force|grasp|safety|validate|registry
  std::filesystem::path config_path;
  std::filesystem::path output_dir = ".";
  std::string format = "csv";  // csv|json|svg
  int samples = 0;             // 0 selects the command default
  int psi_samples = 50;
  std::optional<std::string> tendon;  // single|double
  std::optional<double> diameter_mm;
  std::optional<double> thickness_mm;
  std::optional<double> force_n;
  std::optional<double> tension_n;
  std::optional<double> theta1_deg;
  std::filesystem::path registry_path = std::filesystem::path(LINKFINGER_DATA_DIR) /
                                        "reference_registry.json";
  bool emit_registry = false;
};

// Runs one command. Diagnostics go to `err` as a single line; results to
// `out` and to files under output_dir. Returns 0 on success, 1 on a domain
// error (no closure, failed check, rule violation), 2 on config or IO errors.
int Run(const RunConfig& config, std::ostream& out, std::ostream& err);

// CSV number formatting shared by every emitted table: 9 significant digits.
std::string FormatNumber(double value);

}  // namespace linkfinger::cli
