#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <unistd.h>

#include "linkfinger/config.hpp"
#include "linkfinger/registry.hpp"
#include "linkfinger/run.hpp"
#include "test_support.hpp"

namespace linkfinger::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    root_ = fs::temp_directory_path() / fmt::format("linkfinger_cli_{}_{}", info->name(), ::getpid());
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  RunConfig Command(const std::string& name, const std::string& out = "out") const {
    RunConfig config;
    config.command = name;
    config.config_path = testing::DefaultConfigPath();
    config.output_dir = root_ / out;
    return config;
  }

  int Exec(const RunConfig& config) {
    out_.str("");
    err_.str("");
    return cli::Run(config, out_, err_);
  }

  fs::path WriteText(const std::string& name, const std::string& text) const {
    const fs::path path = root_ / name;
    std::ofstream(path) << text;
    return path;
  }

  fs::path root_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, AnalyzePrintsMobilityAndLoops) {
  EXPECT_EQ(Exec(Command("analyze")), kExitOk);
  EXPECT_NE(out_.str().find("M=1, loops=2"), std::string::npos);
  EXPECT_NE(out_.str().find("kappa3="), std::string::npos);
}

TEST_F(CliTest, ValidateThousandSamples) {
  RunConfig config = Command("validate");
  config.samples = 1000;
  EXPECT_EQ(Exec(config), kExitOk) << err_.str();
  EXPECT_NE(out_.str().find("samples=1000"), std::string::npos);
}

TEST_F(CliTest, SweepFilesAreByteIdenticalAcrossRuns) {
  for (const std::string format : {"csv", "svg", "json"}) {
    RunConfig first = Command("sweep", "a_" + format);
    first.format = format;
    RunConfig second = Command("sweep", "b_" + format);
    second.format = format;
    ASSERT_EQ(Exec(first), kExitOk) << err_.str();
    ASSERT_EQ(Exec(second), kExitOk) << err_.str();
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(first.output_dir)) {
      ++files;
      EXPECT_EQ(ReadFile(entry.path()), ReadFile(second.output_dir / entry.path().filename()));
    }
    EXPECT_EQ(files, format == "json" ? 1u : 2u);
  }
}

TEST_F(CliTest, EmittedFilesCarryTheConfigHash) {
  const std::string hash = testing::DefaultConfig().sha256;
  RunConfig csv = Command("sweep");
  ASSERT_EQ(Exec(csv), kExitOk);
  const std::string trace = ReadFile(csv.output_dir / "tip_trace.csv");
  EXPECT_EQ(trace.rfind("# config_sha256=" + hash + "\n", 0), 0u);
  EXPECT_NE(trace.find("theta1_deg,psi_deg,tip_x_mm,tip_y_mm,grip_x_mm,grip_y_mm\n"),
            std::string::npos);
  RunConfig svg = Command("sweep", "svg");
  svg.format = "svg";
  ASSERT_EQ(Exec(svg), kExitOk);
  EXPECT_NE(ReadFile(svg.output_dir / "joint_angles.svg").find(hash), std::string::npos);
  RunConfig json = Command("sweep", "json");
  json.format = "json";
  ASSERT_EQ(Exec(json), kExitOk);
  EXPECT_EQ(Json::parse(ReadFile(json.output_dir / "sweep.json"))["config_sha256"], hash);
}

TEST_F(CliTest, SweepCsvRowsUseNineSignificantDigits) {
  RunConfig config = Command("sweep");
  config.samples = 5;
  ASSERT_EQ(Exec(config), kExitOk);
  std::istringstream lines(ReadFile(config.output_dir / "joint_angles.csv"));
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 5);
  EXPECT_EQ(FormatNumber(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(FormatNumber(75.0), "75");
}

TEST_F(CliTest, WorkspaceReportsOpeningWidth) {
  RunConfig config = Command("workspace");
  config.samples = 20;
  config.psi_samples = 5;
  ASSERT_EQ(Exec(config), kExitOk) << err_.str();
  EXPECT_NE(out_.str().find("max_opening_width_mm="), std::string::npos);
  EXPECT_NE(ReadFile(config.output_dir / "workspace.csv").find("# max_opening_width_mm="),
            std::string::npos);
}

TEST_F(CliTest, ForceBothTendons) {
  for (const std::string tendon : {"single", "double"}) {
    RunConfig config = Command("force", tendon);
    config.tendon = tendon;
    ASSERT_EQ(Exec(config), kExitOk) << err_.str();
    EXPECT_NE(out_.str().find("tendon=" + tendon), std::string::npos);
  }
}

TEST_F(CliTest, GraspReportsEvenWhenInfeasible) {
  RunConfig config = Command("grasp");
  config.diameter_mm = 100.0;
  EXPECT_EQ(Exec(config), kExitOk);
  EXPECT_NE(out_.str().find("grasp_type=cylindrical feasible=true"), std::string::npos);
  config.diameter_mm = 200.0;
  EXPECT_EQ(Exec(config), kExitOk);
  EXPECT_NE(out_.str().find("feasible=false"), std::string::npos);
  config.diameter_mm.reset();
  config.thickness_mm = 0.5;
  EXPECT_EQ(Exec(config), kExitOk);
  EXPECT_NE(out_.str().find("grasp_type=pinch"), std::string::npos);
}

TEST_F(CliTest, SafetyPassesWithModelForces) {
  EXPECT_EQ(Exec(Command("safety")), kExitOk) << out_.str();
  EXPECT_NE(out_.str().find("per_side=170 mm, fits=true"), std::string::npos);
}

TEST_F(CliTest, RegistryPassesAndEmitReproducesShippedFile) {
  EXPECT_EQ(Exec(Command("registry")), kExitOk);
  RunConfig emit = Command("registry", "emitted");
  emit.emit_registry = true;
  ASSERT_EQ(Exec(emit), kExitOk);
  EXPECT_EQ(ReadFile(emit.output_dir / "reference_registry.json"),
            ReadFile(emit.registry_path));
}

// Each injected fault must land on its contracted exit code with exactly
// one diagnostic line.
TEST_F(CliTest, FaultInjectionExitCodes) {
  Json stuck = Json::parse(ReadFile(testing::DefaultConfigPath()));
  stuck["v"] = {10, 10, 1, 0.5, 30, 48, 36, 35};
  const fs::path no_closure = WriteText("no_closure.json", stuck.dump());
  Json extra = Json::parse(ReadFile(testing::DefaultConfigPath()));
  extra["colour"] = "red";
  const fs::path unknown_key = WriteText("unknown_key.json", extra.dump());
  const fs::path faulty_registry = WriteText(
      "faulty_registry.json",
      assist::BuiltinRegistry().WithValue("pinch_force_single_tendon_n", 12.0).ToJson());
  const fs::path broken_registry = WriteText("broken_registry.json", "{\"entries\": 3}");
  const fs::path blocker = WriteText("blocker", "");

  struct Case {
    std::string label;
    std::function<void(RunConfig&)> edit;
    int expected;
  };
  const std::vector<Case> cases = {
      {"sweep no closure", [&](RunConfig& c) { c.config_path = no_closure; }, kExitDomainError},
      {"validate no closure",
       [&](RunConfig& c) {
         c.command = "validate";
         c.config_path = no_closure;
       },
       kExitDomainError},
      {"safety over limit",
       [](RunConfig& c) {
         c.command = "safety";
         c.force_n = 221.0;
       },
       kExitDomainError},
      {"registry rule violation",
       [&](RunConfig& c) {
         c.command = "registry";
         c.registry_path = faulty_registry;
       },
       kExitDomainError},
      {"grasp zero diameter",
       [](RunConfig& c) {
         c.command = "grasp";
         c.diameter_mm = 0.0;
       },
       kExitDomainError},
      {"grasp with faulty registry",
       [&](RunConfig& c) {
         c.command = "grasp";
         c.diameter_mm = 50.0;
         c.registry_path = faulty_registry;
       },
       kExitDomainError},
      {"missing config", [](RunConfig& c) { c.config_path = "/nonexistent.json"; }, kExitConfigError},
      {"no config", [](RunConfig& c) { c.config_path.clear(); }, kExitConfigError},
      {"unknown key", [&](RunConfig& c) { c.config_path = unknown_key; }, kExitConfigError},
      {"one sample", [](RunConfig& c) { c.samples = 1; }, kExitConfigError},
      {"bad format", [](RunConfig& c) { c.format = "png"; }, kExitConfigError},
      {"unwritable output", [&](RunConfig& c) { c.output_dir = blocker / "sub"; }, kExitConfigError},
      {"unknown command", [](RunConfig& c) { c.command = "fly"; }, kExitConfigError},
      {"unknown tendon",
       [](RunConfig& c) {
         c.command = "force";
         c.tendon = "triple";
       },
       kExitConfigError},
      {"grasp needs one object",
       [](RunConfig& c) { c.command = "grasp"; },
       kExitConfigError},
      {"registry malformed",
       [&](RunConfig& c) {
         c.command = "registry";
         c.registry_path = broken_registry;
       },
       kExitConfigError},
      {"registry missing",
       [](RunConfig& c) {
         c.command = "registry";
         c.registry_path = "/nonexistent/registry.json";
       },
       kExitConfigError},
  };
  for (const Case& c : cases) {
    RunConfig config = Command("sweep", "fault");
    c.edit(config);
    EXPECT_EQ(Exec(config), c.expected) << c.label << ": " << err_.str();
    const std::string diag = err_.str();
    EXPECT_EQ(std::count(diag.begin(), diag.end(), '\n'), 1) << c.label << ": " << diag;
  }
}

}  // namespace
}  // namespace linkfinger::cli
