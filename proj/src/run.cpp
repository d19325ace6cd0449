#include "linkfinger/run.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "linkfinger/config.hpp"
#include "linkfinger/error.hpp"
#include "linkfinger/finger.hpp"
#include "linkfinger/grasp.hpp"
#include "linkfinger/linkage.hpp"
#include "linkfinger/oracle.hpp"
#include "linkfinger/registry.hpp"
#include "linkfinger/safety.hpp"
#include "linkfinger/svg.hpp"

namespace linkfinger::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using finger::TendonKind;
using finger::TendonModel;
using linkage::JointState;

constexpr double kValidateTolerance = 1e-9;

class Table {
 public:
  Table(std::string hash, std::vector<std::string> columns)
      : hash_(std::move(hash)), columns_(std::move(columns)) {}

  void AddComment(std::string line) { comments_.push_back(std::move(line)); }
  void AddRow(const std::vector<double>& row) { rows_.push_back(row); }

  std::string Csv() const {
    std::string text = fmt::format("# config_sha256={}\n", hash_);
    for (const std::string& c : comments_) text += fmt::format("# {}\n", c);
    text += fmt::format("{}\n", fmt::join(columns_, ","));
    for (const auto& row : rows_) {
      std::vector<std::string> cells;
      for (double v : row) cells.push_back(FormatNumber(v));
      text += fmt::format("{}\n", fmt::join(cells, ","));
    }
    return text;
  }

  Json ToJson() const {
    Json rows = Json::array();
    for (const auto& row : rows_) {
      Json item;
      for (std::size_t i = 0; i < columns_.size(); ++i) item[columns_[i]] = row[i];
      rows.push_back(std::move(item));
    }
    return rows;
  }

 private:
  std::string hash_;
  std::vector<std::string> columns_;
  std::vector<std::string> comments_;
  std::vector<std::vector<double>> rows_;
};

class Emitter {
 public:
  Emitter(fs::path dir, std::string hash, std::ostream& out)
      : dir_(std::move(dir)), hash_(std::move(hash)), out_(out) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) {
      throw Error(ErrorKind::kIo, fmt::format("cannot create output directory '{}'", dir_.string()));
    }
  }

  void Write(const std::string& name, const std::string& content) {
    const fs::path path = dir_ / name;
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    file << content;
    file.close();
    if (!file) throw Error(ErrorKind::kIo, fmt::format("cannot write '{}'", path.string()));
    out_ << "wrote " << path.string() << "\n";
  }

  void WriteSvg(const std::string& name, std::span<const plot::Series> series,
                const plot::AxesSpec& axes) {
    Write(name, fmt::format("<!-- config_sha256={} -->\n{}", hash_, plot::RenderSvg(series, axes)));
  }

  void WriteJson(const std::string& name, Json body) {
    Json doc;
    doc["config_sha256"] = hash_;
    for (auto& [key, value] : body.items()) doc[key] = value;
    Write(name, doc.dump(2) + "\n");
  }

 private:
  fs::path dir_;
  std::string hash_;
  std::ostream& out_;
};

[[noreturn]] void Invalid(const std::string& message) {
  throw Error(ErrorKind::kInvalidConfig, message);
}

void RequireFormat(const RunConfig& config) {
  if (config.format != "csv" && config.format != "json" && config.format != "svg") {
    Invalid(fmt::format("unknown format '{}' (expected csv, json or svg)", config.format));
  }
}

int SamplesOr(const RunConfig& config, int fallback) {
  const int samples = config.samples == 0 ? fallback : config.samples;
  if (samples < 2) Invalid(fmt::format("--samples must be at least 2 (got {})", samples));
  return samples;
}

GripperConfig LoadConfig(const RunConfig& config) {
  if (config.config_path.empty()) Invalid("--config is required for this command");
  return LoadGripperConfig(config.config_path);
}

TendonModel SelectTendon(const RunConfig& config, const GripperConfig& gripper) {
  const TendonModel& shipped = gripper.RequireTendon();
  if (!config.tendon) return shipped;
  if (*config.tendon == "double") return shipped.WithKind(TendonKind::kDouble);
  if (*config.tendon == "single") {
    if (shipped.kind != TendonKind::kSingle) {
      Invalid("--tendon single needs a config whose tendon carries spring terms");
    }
    return shipped;
  }
  Invalid(fmt::format("unknown tendon '{}' (expected single or double)", *config.tendon));
}

double PlotPsi(const finger::FingerGeometry& finger) {
  return std::clamp(0.0, finger.orientation_range.lo, finger.orientation_range.hi);
}

double MidRange(const linkage::LinkageGeometry& geometry) {
  return 0.5 * (geometry.theta1_range.lo + geometry.theta1_range.hi);
}

const char* KindName(TendonKind kind) { return kind == TendonKind::kSingle ? "single" : "double"; }

int RunAnalyze(const RunConfig& config, std::ostream& out) {
  const GripperConfig gripper = LoadConfig(config);
  const int mobility = linkage::ComputeMobility(linkage::kFingerLinks, linkage::kFingerJoints);
  const int loops = linkage::CountLoops(linkage::kFingerJoints, linkage::kFingerLinks);
  const auto first = linkage::ComputeLoopCoefficients(gripper.linkage, linkage::LoopId::kFirst);
  const auto second = linkage::ComputeLoopCoefficients(gripper.linkage, linkage::LoopId::kSecond);
  out << fmt::format("M={}, loops={}\n", mobility, loops);
  out << fmt::format("loop 1: kappa1={} kappa2={} kappa3={}\n", FormatNumber(first.sum_coeff),
                     FormatNumber(first.out_coeff), FormatNumber(first.constant));
  out << fmt::format("loop 2: kappa4={} kappa5={} kappa6={}\n", FormatNumber(second.sum_coeff),
                     FormatNumber(second.out_coeff), FormatNumber(second.constant));
  return kExitOk;
}

int RunSweep(const RunConfig& config, std::ostream& out) {
  RequireFormat(config);
  const GripperConfig gripper = LoadConfig(config);
  const auto& finger = gripper.RequireFinger();
  const int samples = SamplesOr(config, 100);
  const auto sweep = finger::SweepSpec::FullRange(gripper.linkage, samples);
  const std::vector<JointState> states = finger::SweepStates(gripper.linkage, sweep);
  const double psi = PlotPsi(finger);

  Table joints(gripper.sha256, {"theta1_deg", "theta2_deg", "theta6_deg", "theta_mcp_deg",
                                "theta_pip_deg", "theta_dip_deg"});
  Table trace(gripper.sha256,
              {"theta1_deg", "psi_deg", "tip_x_mm", "tip_y_mm", "grip_x_mm", "grip_y_mm"});
  std::vector<finger::TipSample> tips;
  for (const JointState& s : states) {
    joints.AddRow({RadToDeg(s.theta1), RadToDeg(s.theta2), RadToDeg(s.theta6),
                   RadToDeg(s.theta_mcp), RadToDeg(s.theta_pip), RadToDeg(s.theta_dip)});
    tips.push_back(finger::TipPosition(finger, s, psi));
    const auto& t = tips.back();
    trace.AddRow({RadToDeg(t.theta1), RadToDeg(t.psi), t.planar.x, t.planar.y, t.gripper.x,
                  t.gripper.y});
  }

  Emitter emit(config.output_dir, gripper.sha256, out);
  if (config.format == "csv") {
    emit.Write("joint_angles.csv", joints.Csv());
    emit.Write("tip_trace.csv", trace.Csv());
  } else if (config.format == "json") {
    Json body;
    body["joint_angles"] = joints.ToJson();
    body["tip_trace"] = trace.ToJson();
    emit.WriteJson("sweep.json", std::move(body));
  } else {
    std::vector<plot::Series> angle_series = {{"theta2", {}}, {"theta6", {}}, {"MCP", {}},
                                              {"PIP", {}},    {"DIP", {}}};
    for (const JointState& s : states) {
      const double x = RadToDeg(s.theta1);
      angle_series[0].points.emplace_back(x, RadToDeg(s.theta2));
      angle_series[1].points.emplace_back(x, RadToDeg(s.theta6));
      angle_series[2].points.emplace_back(x, RadToDeg(s.theta_mcp));
      angle_series[3].points.emplace_back(x, RadToDeg(s.theta_pip));
      angle_series[4].points.emplace_back(x, RadToDeg(s.theta_dip));
    }
    emit.WriteSvg("joint_angles.svg", angle_series,
                  {"Joint angles vs input angle", "theta1 (deg)", "angle (deg)", false});
    std::vector<plot::Series> tip_series = {{"fingertip", {}}};
    for (const auto& t : tips) tip_series[0].points.emplace_back(t.planar.x, t.planar.y);
    emit.WriteSvg("tip_trace.svg", tip_series, {"Fingertip trace", "x (mm)", "y (mm)", true});
  }
  return kExitOk;
}

int RunWorkspace(const RunConfig& config, std::ostream& out) {
  RequireFormat(config);
  const GripperConfig gripper = LoadConfig(config);
  const auto& finger = gripper.RequireFinger();
  const int samples = SamplesOr(config, 200);
  if (config.psi_samples < 2) Invalid("--psi-samples must be at least 2");
  const auto result = finger::Workspace(gripper.linkage, finger, gripper.RequireThumbLine(),
                                        samples, config.psi_samples);
  const auto& widest = result.cloud[result.widest_index];
  out << fmt::format("max_opening_width_mm={} at theta1_deg={} psi_deg={}\n",
                     FormatNumber(result.max_opening_width), FormatNumber(RadToDeg(widest.theta1)),
                     FormatNumber(RadToDeg(widest.psi)));

  Table cloud(gripper.sha256,
              {"theta1_deg", "psi_deg", "tip_x_mm", "tip_y_mm", "grip_x_mm", "grip_y_mm"});
  cloud.AddComment(fmt::format("max_opening_width_mm={}", FormatNumber(result.max_opening_width)));
  for (const auto& t : result.cloud) {
    cloud.AddRow({RadToDeg(t.theta1), RadToDeg(t.psi), t.planar.x, t.planar.y, t.gripper.x,
                  t.gripper.y});
  }
  Emitter emit(config.output_dir, gripper.sha256, out);
  if (config.format == "csv") {
    emit.Write("workspace.csv", cloud.Csv());
  } else if (config.format == "json") {
    Json body;
    body["max_opening_width_mm"] = result.max_opening_width;
    body["cloud"] = cloud.ToJson();
    emit.WriteJson("workspace.json", std::move(body));
  } else {
    // One gripper-frame trace per orientation extreme plus the middle one.
    std::vector<plot::Series> series;
    const int n = config.psi_samples;
    for (int j : {0, n / 2, n - 1}) {
      plot::Series s;
      for (int i = 0; i < samples; ++i) {
        const auto& t = result.cloud[static_cast<std::size_t>(i * n + j)];
        if (s.points.empty()) s.name = fmt::format("psi {:.1f} deg", RadToDeg(t.psi));
        s.points.emplace_back(t.gripper.x, t.gripper.y);
      }
      series.push_back(std::move(s));
    }
    const auto& thumb = gripper.RequireThumbLine();
    series.push_back({"thumb", {{thumb.a.x, thumb.a.y}, {thumb.b.x, thumb.b.y}}});
    emit.WriteSvg("workspace.svg", series, {"Gripper workspace", "x (mm)", "y (mm)", true});
  }
  return kExitOk;
}

int RunForce(const RunConfig& config, std::ostream& out) {
  RequireFormat(config);
  const GripperConfig gripper = LoadConfig(config);
  const auto& finger = gripper.RequireFinger();
  const TendonModel tendon = SelectTendon(config, gripper);
  const double tension = config.tension_n.value_or(tendon.max_tension);
  const int samples = SamplesOr(config, 100);
  const auto states =
      finger::SweepStates(gripper.linkage, finger::SweepSpec::FullRange(gripper.linkage, samples));

  Table table(gripper.sha256, {"theta1_deg", "tension_n", "excursion_mm", "excursion_rate_mm_per_rad",
                               "tip_speed_mm_per_rad", "spring_torque_nmm", "force_n"});
  table.AddComment(fmt::format("tendon={}", KindName(tendon.kind)));
  plot::Series series{fmt::format("{} tendon, {} N", KindName(tendon.kind), FormatNumber(tension)),
                      {}};
  double peak = 0.0;
  for (const JointState& s : states) {
    const auto excursion = finger::TendonExcursion(tendon, gripper.linkage, s);
    const double speed = finger::TipSpeed(finger, gripper.linkage, s);
    const double force = finger::StaticTipForce(tendon, gripper.linkage, finger, s, tension);
    peak = std::max(peak, force);
    table.AddRow({RadToDeg(s.theta1), tension, excursion.length, excursion.rate, speed,
                  finger::SpringTorque(tendon, gripper.linkage, s.theta1), force});
    series.points.emplace_back(RadToDeg(s.theta1), force);
  }
  out << fmt::format("tendon={} tension_n={} peak_force_n={}\n", KindName(tendon.kind),
                     FormatNumber(tension), FormatNumber(peak));
  Emitter emit(config.output_dir, gripper.sha256, out);
  if (config.format == "csv") {
    emit.Write("force.csv", table.Csv());
  } else if (config.format == "json") {
    Json body;
    body["tendon"] = KindName(tendon.kind);
    body["samples"] = table.ToJson();
    emit.WriteJson("force.json", std::move(body));
  } else {
    emit.WriteSvg("force.svg", std::span<const plot::Series>(&series, 1),
                  {"Static tip force", "theta1 (deg)", "force (N)", false});
  }
  return kExitOk;
}

int RunGrasp(const RunConfig& config, std::ostream& out) {
  const GripperConfig gripper = LoadConfig(config);
  const auto registry = assist::ReferenceRegistry::Load(config.registry_path);
  if (config.diameter_mm.has_value() == config.thickness_mm.has_value()) {
    Invalid("grasp needs exactly one of --diameter-mm or --thickness-mm");
  }
  finger::ForceContext context{
      .geometry = gripper.linkage,
      .finger = gripper.RequireFinger(),
      .tendon = SelectTendon(config, gripper),
      .theta1 = config.theta1_deg ? DegToRad(*config.theta1_deg) : MidRange(gripper.linkage),
      .tension = 0.0,
  };
  context.tension = config.tension_n.value_or(context.tendon.max_tension);
  const finger::GraspObject object =
      config.diameter_mm ? finger::GraspObject{finger::CylinderObject{*config.diameter_mm}}
                         : finger::GraspObject{finger::FlatObject{*config.thickness_mm}};
  const auto report = finger::AssessGrasp(object, registry, context);
  out << fmt::format("grasp_type={} feasible={} predicted_force_n={} margin={}\nnotes: {}\n",
                     finger::ToString(report.grasp_type), report.feasible ? "true" : "false",
                     FormatNumber(report.predicted_force), FormatNumber(report.margin),
                     report.notes);
  return kExitOk;
}

// Largest tip force either actuation variant can produce at max tension.
double ModelForceCeiling(const GripperConfig& gripper, int samples) {
  const auto& finger = gripper.RequireFinger();
  const auto states =
      finger::SweepStates(gripper.linkage, finger::SweepSpec::FullRange(gripper.linkage, samples));
  double ceiling = 0.0;
  for (TendonKind kind : {TendonKind::kSingle, TendonKind::kDouble}) {
    const TendonModel& shipped = gripper.RequireTendon();
    if (kind == TendonKind::kSingle && shipped.kind != TendonKind::kSingle) continue;
    const TendonModel tendon = shipped.WithKind(kind);
    for (const JointState& s : states) {
      ceiling = std::max(ceiling, finger::StaticTipForce(tendon, gripper.linkage, finger, s,
                                                         tendon.max_tension));
    }
  }
  return ceiling;
}

int RunSafety(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto registry = assist::ReferenceRegistry::Load(config.registry_path);
  double force = 0.0;
  std::string force_source;
  if (config.force_n) {
    force = *config.force_n;
    force_source = "--force-n";
  } else {
    force = ModelForceCeiling(LoadConfig(config), SamplesOr(config, 200));
    force_source = "model ceiling";
  }
  const auto iso = assist::IsoContactCheck(force, assist::ContactRegion::kThighKnee, registry);
  const auto clearance = assist::ClearanceCheck(registry.value("toilet_width_mm"),
                                                registry.value("shoulder_width_mm"),
                                                registry.value("secondary_outer_diameter_mm"));
  const auto primary = assist::ClearanceCheck(registry.value("toilet_width_mm"),
                                              registry.value("shoulder_width_mm"),
                                              registry.value("primary_outer_diameter_mm"));
  const double available = registry.value("secondary_max_extension_mm");
  const auto raise = assist::StrokeCheck(registry.value("trouser_raise_travel_mm"), available);
  const auto travel = assist::StrokeCheck(registry.value("required_trouser_travel_mm"), available);

  const auto verdict = [](bool pass) { return pass ? "PASS" : "FAIL"; };
  out << fmt::format("{} contact force {} N ({}) <= {} N, margin_ratio={}\n", verdict(iso.pass),
                     FormatNumber(force), force_source, FormatNumber(iso.applied_limit),
                     FormatNumber(iso.margin_ratio));
  out << fmt::format("{} secondary manipulator clearance: per_side={} mm, fits={}\n",
                     verdict(clearance.fits), FormatNumber(clearance.per_side_clearance),
                     clearance.fits ? "true" : "false");
  out << fmt::format("INFO primary manipulator clearance: per_side={} mm, fits={}\n",
                     FormatNumber(primary.per_side_clearance), primary.fits ? "true" : "false");
  out << fmt::format("{} stroke for trouser raise: slack={} mm\n", verdict(raise.pass),
                     FormatNumber(raise.slack));
  out << fmt::format("{} stroke for trouser travel: slack={} mm\n", verdict(travel.pass),
                     FormatNumber(travel.slack));
  std::vector<std::string> failed;
  if (!iso.pass) failed.push_back("contact force");
  if (!clearance.fits) failed.push_back("secondary manipulator clearance");
  if (!raise.pass) failed.push_back("trouser raise stroke");
  if (!travel.pass) failed.push_back("trouser travel stroke");
  if (failed.empty()) return kExitOk;
  err << fmt::format("error: safety check failed: {}\n", fmt::join(failed, ", "));
  return kExitDomainError;
}

int RunValidate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const GripperConfig gripper = LoadConfig(config);
  const int samples = SamplesOr(config, 1000);
  const auto sweep = finger::SweepSpec::FullRange(gripper.linkage, samples);
  double max_deviation = 0.0;
  double max_residual = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double theta1 = sweep.at(i);
    const JointState closed = linkage::SolveChain(gripper.linkage, theta1);
    const JointState numeric = linkage::SolveChainNumeric(gripper.linkage, theta1);
    max_deviation = std::max({max_deviation,
                              std::abs(linkage::WrapAngle(closed.theta2 - numeric.theta2)),
                              std::abs(linkage::WrapAngle(closed.theta6 - numeric.theta6))});
    const auto [r1, r2] = linkage::ChainResiduals(gripper.linkage, closed);
    max_residual = std::max({max_residual, std::abs(r1), std::abs(r2)});
  }
  out << fmt::format("samples={} max_deviation_rad={:.3e} max_residual={:.3e}\n", samples,
                     max_deviation, max_residual);
  if (max_deviation > kValidateTolerance) {
    err << fmt::format("error: closed form and numeric oracle differ by {:.3e} rad (> {:.0e})\n",
                       max_deviation, kValidateTolerance);
    return kExitDomainError;
  }
  return kExitOk;
}

int RunRegistry(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.emit_registry) {
    Emitter emit(config.output_dir, "builtin", out);
    emit.Write("reference_registry.json", assist::BuiltinRegistry().ToJson());
    return kExitOk;
  }
  const auto registry = assist::ReferenceRegistry::FromJson(ReadFile(config.registry_path));
  const auto report = assist::VerifyRegistry(registry);
  for (const auto& outcome : report.outcomes) {
    out << fmt::format("{} {}", outcome.pass ? "PASS" : "FAIL", outcome.id);
    if (!outcome.pass) out << ": " << outcome.detail;
    out << "\n";
  }
  out << fmt::format("{} entries, {} rules\n", registry.entries().size(), registry.rules().size());
  std::vector<std::string> failed;
  for (const auto& outcome : report.outcomes) {
    if (!outcome.pass) failed.push_back(outcome.id);
  }
  if (failed.empty()) return kExitOk;
  err << fmt::format("error: RuleViolation: {}\n", fmt::join(failed, ", "));
  return kExitDomainError;
}

}  // namespace

std::string FormatNumber(double value) { return fmt::format("{:.9g}", value); }

int Run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  static const std::map<std::string, std::function<int(const RunConfig&, std::ostream&,
                                                      std::ostream&)>>
      kCommands = {
          {"analyze", [](const auto& c, auto& o, auto&) { return RunAnalyze(c, o); }},
          {"sweep", [](const auto& c, auto& o, auto&) { return RunSweep(c, o); }},
          {"workspace", [](const auto& c, auto& o, auto&) { return RunWorkspace(c, o); }},
          {"force", [](const auto& c, auto& o, auto&) { return RunForce(c, o); }},
          {"grasp", [](const auto& c, auto& o, auto&) { return RunGrasp(c, o); }},
          {"safety", [](const auto& c, auto& o, auto& e) { return RunSafety(c, o, e); }},
          {"validate", [](const auto& c, auto& o, auto& e) { return RunValidate(c, o, e); }},
          {"registry", [](const auto& c, auto& o, auto& e) { return RunRegistry(c, o, e); }},
      };
  const auto it = kCommands.find(config.command);
  if (it == kCommands.end()) {
    err << fmt::format("error: unknown command '{}'\n", config.command);
    return kExitConfigError;
  }
  try {
    return it->second(config, out, err);
  } catch (const Error& e) {
    err << fmt::format("error: {}: {}\n", ToString(e.kind()), e.what());
    return e.is_domain_error() ? kExitDomainError : kExitConfigError;
  } catch (const fs::filesystem_error& e) {
    err << fmt::format("error: IoError: {}\n", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << fmt::format("error: {}\n", e.what());
    return kExitConfigError;
  }
}

}  // namespace linkfinger::cli
