#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "linkfinger/run.hpp"

namespace {

void AddCommon(CLI::App* sub, linkfinger::cli::RunConfig& config) {
  sub->add_option("--config", config.config_path, "Gripper config JSON");
  sub->add_option("--out", config.output_dir, "Directory for emitted files");
  sub->add_option("--format", config.format, "csv | json | svg")
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  sub->add_option("--samples", config.samples, "theta1 samples (command default when omitted)");
  sub->add_option("--registry", config.registry_path, "Reference registry JSON");
}

}  // namespace

int main(int argc, char** argv) {
  linkfinger::cli::RunConfig config;
  CLI::App app{"Linkage-driven finger analysis"};
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"analyze", "Mobility, loop count and loop coefficients"},
      {"sweep", "Joint angles and fingertip trace over the theta1 range"},
      {"workspace", "Gripper-frame point cloud and maximum opening width"},
      {"force", "Static tip force along the theta1 range"},
      {"grasp", "Grasp feasibility for a cylinder or flat object"},
      {"safety", "Contact-force, clearance and stroke checks"},
      {"validate", "Closed form against the numeric oracle"},
      {"registry", "Verify the reference registry"},
  };
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    AddCommon(sub, config);
    sub->callback([&config, name = std::string(c.name)] { config.command = name; });
    const std::string name = c.name;
    if (name == "workspace") {
      sub->add_option("--psi-samples", config.psi_samples, "Orientation samples");
    }
    if (name == "force" || name == "grasp") {
      sub->add_option("--tendon", config.tendon, "single | double")
          ->check(CLI::IsMember({"single", "double"}));
      sub->add_option("--tension-n", config.tension_n, "Tendon tension (default: max)");
    }
    if (name == "grasp") {
      sub->add_option("--diameter-mm", config.diameter_mm, "Cylinder diameter");
      sub->add_option("--thickness-mm", config.thickness_mm, "Flat object thickness");
      sub->add_option("--theta1-deg", config.theta1_deg, "Contact configuration");
    }
    if (name == "safety") {
      sub->add_option("--force-n", config.force_n, "Contact force to check");
    }
    if (name == "registry") {
      sub->add_flag("--emit", config.emit_registry, "Write the built-in registry to --out");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : linkfinger::cli::kExitConfigError;
  }
  return linkfinger::cli::Run(config, std::cout, std::cerr);
}
