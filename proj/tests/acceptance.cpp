// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <unistd.h>

#include "linkfinger/config.hpp"
#include "linkfinger/error.hpp"
#include "linkfinger/finger.hpp"
#include "linkfinger/grasp.hpp"
#include "linkfinger/linkage.hpp"
#include "linkfinger/oracle.hpp"
#include "linkfinger/registry.hpp"
#include "linkfinger/run.hpp"
#include "linkfinger/safety.hpp"
#include "test_support.hpp"

namespace {

namespace fs = std::filesystem;
using namespace linkfinger;
using linkage::JointState;
using testing::AngleGap;
using testing::kPi;

struct Verdict {
  bool pass = false;
  std::string detail;
};

const assist::ReferenceRegistry& Shipped() {
  static const auto registry =
      assist::ReferenceRegistry::Load(std::string(LINKFINGER_DATA_DIR) + "/reference_registry.json");
  return registry;
}

Verdict MobilityAndLoops() {
  const int m = linkage::ComputeMobility(6, 7);
  const int p = linkage::CountLoops(7, 6);
  return {m == 1 && p == 2, fmt::format("M={} loops={}", m, p)};
}

Verdict OracleEquivalence() {
  const auto& g = testing::DefaultConfig().linkage;
  const finger::SweepSpec sweep = finger::SweepSpec::FullRange(g, 1000);
  double worst = 0.0;
  for (int i = 0; i < sweep.samples; ++i) {
    const JointState closed = linkage::SolveChain(g, sweep.at(i));
    const JointState numeric = linkage::SolveChainNumeric(g, sweep.at(i));
    worst = std::max({worst, AngleGap(closed.theta2, numeric.theta2),
                      AngleGap(closed.theta6, numeric.theta6)});
  }
  cli::RunConfig config;
  config.command = "validate";
  config.config_path = testing::DefaultConfigPath();
  config.samples = 1000;
  std::ostringstream out, err;
  const auto start = std::chrono::steady_clock::now();
  const int status = cli::Run(config, out, err);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-9 && status == 0 && seconds < 1.0,
          fmt::format("max deviation {:.2e} rad (limit 1e-9), validate exit {} in {:.3f} s", worst,
                      status, seconds)};
}

Verdict ResidualSuite() {
  std::mt19937_64 rng(1);
  int failures = 0;
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto sample = testing::DrawFeasible(rng);
    const auto [r1, r2] = linkage::ChainResiduals(sample.geometry, sample.state);
    const double r1_independent =
        testing::IndependentResidual(sample.geometry, 1, sample.state.theta1, sample.state.theta2);
    const double r2_independent =
        testing::IndependentResidual(sample.geometry, 2, sample.state.theta5, sample.state.theta6);
    const double r = std::max({std::abs(r1), std::abs(r2), std::abs(r1_independent),
                               std::abs(r2_independent)});
    worst = std::max(worst, r);
    if (r > 1e-10) ++failures;
  }
  return {failures == 0,
          fmt::format("10000 geometries, {} failures, max |r| {:.2e} (limit 1e-10)", failures, worst)};
}

Verdict ScalingInvariance() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> phalanx(10.0, 60.0);
  double worst_angle = 0.0;
  double worst_point = 0.0;
  for (int i = 0; i < 100;) {
    auto sample = testing::DrawFeasible(rng);
    sample.geometry.theta1_range = {sample.theta1, sample.theta1 + 0.02};
    finger::FingerGeometry f;
    f.phalanx = {phalanx(rng), phalanx(rng), phalanx(rng)};
    f.base_offset = {5.0, -3.0};
    f.orientation_range = {-0.3, 0.3};
    const finger::Segment2 thumb{{40, -80}, {40, 20}};
    finger::WorkspaceResult base;
    try {
      base = finger::Workspace(sample.geometry, f, thumb, 5, 3);
    } catch (const Error&) {
      continue;  // the short input interval left the closure region
    }
    ++i;
    for (double s : {0.1, 3.0, 10.0}) {
      const auto scaled_geometry = sample.geometry.Scaled(s);
      const JointState st = linkage::SolveChain(scaled_geometry, sample.theta1);
      worst_angle = std::max({worst_angle, AngleGap(st.theta2, sample.state.theta2),
                              AngleGap(st.theta3, sample.state.theta3),
                              AngleGap(st.theta6, sample.state.theta6),
                              AngleGap(st.theta7, sample.state.theta7)});
      const finger::Segment2 scaled_thumb{{s * thumb.a.x, s * thumb.a.y}, {s * thumb.b.x, s * thumb.b.y}};
      const auto scaled = finger::Workspace(scaled_geometry, f.Scaled(s), scaled_thumb, 5, 3);
      for (std::size_t k = 0; k < base.cloud.size(); ++k) {
        const std::complex<double> expected(s * base.cloud[k].gripper.x, s * base.cloud[k].gripper.y);
        const std::complex<double> got(scaled.cloud[k].gripper.x, scaled.cloud[k].gripper.y);
        worst_point = std::max(worst_point, std::abs(got - expected) / std::abs(expected));
      }
    }
  }
  return {worst_angle <= 1e-12 && worst_point <= 1e-9,
          fmt::format("100 geometries x s in {{0.1, 3, 10}}: max angle change {:.2e} rad (limit "
                      "1e-12), max point error {:.2e} relative (limit 1e-9)",
                      worst_angle, worst_point)};
}

Verdict DerivativeChecks() {
  const auto& config = testing::DefaultConfig();
  const auto& g = config.linkage;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> input(g.theta1_range.lo + 1e-3, g.theta1_range.hi - 1e-3);
  std::uniform_real_distribution<double> arm(0.5, 10.0);
  std::uniform_real_distribution<double> length(10.0, 60.0);
  const double h = 1e-5;
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    finger::TendonModel tendon = config.RequireTendon();
    tendon.moment_arms = {arm(rng), arm(rng), arm(rng)};
    finger::FingerGeometry f = config.RequireFinger();
    f.phalanx = {length(rng), length(rng), length(rng)};
    const double theta1 = input(rng);
    const JointState s = linkage::SolveChain(g, theta1);
    const JointState up = linkage::SolveChain(g, theta1 + h);
    const JointState down = linkage::SolveChain(g, theta1 - h);
    const double rate = finger::TendonExcursion(tendon, g, s).rate;
    const double rate_fd = (finger::TendonExcursion(tendon, g, up).length -
                            finger::TendonExcursion(tendon, g, down).length) /
                           (2 * h);
    const double speed = finger::TipSpeed(f, g, s);
    const auto tip = [&](const JointState& st) {
      const auto p = finger::TipPosition(f, st, 0.0).planar;
      return std::complex<double>(p.x, p.y);
    };
    const double speed_fd = std::abs((tip(up) - tip(down)) / (2 * h));
    worst = std::max({worst, std::abs(rate - rate_fd) / std::abs(rate_fd),
                      std::abs(speed - speed_fd) / speed_fd});
  }
  return {worst <= 1e-6,
          fmt::format("500 configurations, max relative gap {:.2e} (limit 1e-6)", worst)};
}

Verdict Identities() {
  std::mt19937_64 rng(4);
  long solves = 0;
  long violations = 0;
  const auto check = [&](const linkage::LinkageGeometry& g, const JointState& s) {
    ++solves;
    if (s.theta_mcp != s.theta6 || s.theta_pip != s.theta5 - g.sigma ||
        s.theta_dip != s.theta1 - g.rho) {
      ++violations;
    }
  };
  const auto& g = testing::DefaultConfig().linkage;
  for (const JointState& s : finger::SweepStates(g, finger::SweepSpec::FullRange(g, 1000))) check(g, s);
  for (int i = 0; i < 1000; ++i) {
    const auto sample = testing::DrawFeasible(rng);
    check(sample.geometry, sample.state);
    check(sample.geometry, linkage::SolveChainNumeric(sample.geometry, sample.theta1, 720));
  }
  return {violations == 0, fmt::format("{} solves, {} violations", solves, violations)};
}

Verdict GraspEnvelope() {
  const auto& config = testing::DefaultConfig();
  const auto& g = config.linkage;
  const finger::ForceContext context{g, config.RequireFinger(), config.RequireTendon(),
                                     0.5 * (g.theta1_range.lo + g.theta1_range.hi),
                                     config.RequireTendon().max_tension};
  int mismatches = 0;
  int scanned = 0;
  for (int tenth = 200; tenth <= 1600; ++tenth, ++scanned) {
    const double d = tenth / 10.0;
    const bool feasible = finger::AssessGrasp(finger::CylinderObject{d}, Shipped(), context).feasible;
    if (feasible != (d >= 30.0 && d <= 145.0)) ++mismatches;
  }
  return {mismatches == 0,
          fmt::format("{} diameters in [20, 160] mm, {} mismatches against [30, 145]", scanned,
                      mismatches)};
}

Verdict ForceOrdering() {
  const auto& config = testing::DefaultConfig();
  const auto& single = config.RequireTendon();
  const auto dbl = single.WithKind(finger::TendonKind::kDouble);
  double smallest_gap = INFINITY;
  double peak_single = 0.0, peak_double = 0.0;
  int samples = 0;
  for (const JointState& s :
       finger::SweepStates(config.linkage, finger::SweepSpec::FullRange(config.linkage, 2001))) {
    const double fs = finger::StaticTipForce(single, config.linkage, config.RequireFinger(), s,
                                             single.max_tension);
    const double fd =
        finger::StaticTipForce(dbl, config.linkage, config.RequireFinger(), s, dbl.max_tension);
    smallest_gap = std::min(smallest_gap, fd - fs);
    peak_single = std::max(peak_single, fs);
    peak_double = std::max(peak_double, fd);
    ++samples;
  }
  return {single.kind == finger::TendonKind::kSingle && smallest_gap > 0.0,
          fmt::format("{} samples, min(double - single) {:.3f} N, peaks {:.3f} N < {:.3f} N",
                      samples, smallest_gap, peak_single, peak_double)};
}

Verdict SafetyConstants() {
  const auto& config = testing::DefaultConfig();
  const auto& shipped = config.RequireTendon();
  // Force is non-decreasing in tension, so max tension bounds every attainable force.
  double ceiling = 0.0;
  for (const auto& tendon : {shipped, shipped.WithKind(finger::TendonKind::kDouble)}) {
    for (const JointState& s :
         finger::SweepStates(config.linkage, finger::SweepSpec::FullRange(config.linkage, 2001))) {
      ceiling = std::max(ceiling, finger::StaticTipForce(tendon, config.linkage,
                                                         config.RequireFinger(), s, tendon.max_tension));
    }
  }
  const auto iso = assist::IsoContactCheck(ceiling, assist::ContactRegion::kThighKnee, Shipped());
  const auto clearance = assist::ClearanceCheck(800, 460, 75);
  const auto stroke = assist::StrokeCheck(170, 180);
  return {iso.pass && iso.margin_ratio >= 18.0 && clearance.per_side_clearance == 170.0 &&
              clearance.fits && stroke.pass,
          fmt::format("model ceiling {:.3f} N margin {:.2f} (>= 18); clearance {} mm fits={}; "
                      "stroke slack {} mm",
                      ceiling, iso.margin_ratio, clearance.per_side_clearance, clearance.fits,
                      stroke.slack)};
}

Verdict RegistryVerification() {
  const auto& r = Shipped();
  const auto report = assist::VerifyRegistry(r);
  const bool readback =
      r.value("dressing_prior_successes_count") == 9 && r.value("dressing_prior_trials_count") == 10 &&
      r.value("dressing_prior_success_rate_pct") == 90 &&
      r.value("dressing_proposed_successes_count") == 4 &&
      r.value("dressing_proposed_trials_count") == 4 &&
      r.value("dressing_proposed_success_rate_pct") == 100 &&
      r.value("undressing_prior_successes_count") == 0 &&
      r.value("undressing_prior_trials_count") == 7 &&
      r.value("undressing_prior_success_rate_pct") == 0 &&
      r.value("undressing_proposed_successes_count") == 4 &&
      r.value("undressing_proposed_trials_count") == 4 &&
      r.value("undressing_proposed_success_rate_pct") == 100;
  int passed = 0;
  for (const auto& o : report.outcomes) passed += o.pass ? 1 : 0;
  return {report.all_passed() && readback,
          fmt::format("{}/{} rules pass, outcome readback {}", passed, report.outcomes.size(),
                      readback ? "matches" : "differs")};
}

Verdict Determinism() {
  const fs::path root = fs::temp_directory_path() / fmt::format("linkfinger_acceptance_{}", ::getpid());
  fs::remove_all(root);
  int compared = 0;
  bool identical = true;
  for (const std::string format : {"csv", "svg"}) {
    fs::path dirs[2];
    for (int run = 0; run < 2; ++run) {
      cli::RunConfig config;
      config.command = "sweep";
      config.config_path = testing::DefaultConfigPath();
      config.format = format;
      config.output_dir = dirs[run] = root / fmt::format("{}_{}", format, run);
      std::ostringstream out, err;
      if (cli::Run(config, out, err) != 0) identical = false;
    }
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      ++compared;
      if (ReadFile(entry.path()) != ReadFile(dirs[1] / entry.path().filename())) identical = false;
    }
  }
  fs::remove_all(root);
  return {identical && compared == 4, fmt::format("{} file pairs compared", compared)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"mobility and loop count", MobilityAndLoops},
      {"closed form vs numeric oracle", OracleEquivalence},
      {"residual property suite", ResidualSuite},
      {"scaling invariance", ScalingInvariance},
      {"derivative checks", DerivativeChecks},
      {"definitional identities", Identities},
      {"grasp envelope", GraspEnvelope},
      {"force-model ordering", ForceOrdering},
      {"safety and feasibility constants", SafetyConstants},
      {"registry verification", RegistryVerification},
      {"determinism", Determinism},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, fmt::format("threw: {}", e.what())};
    }
    failed += v.pass ? 0 : 1;
    std::cout << fmt::format("{} {:2d} {}: {}\n", v.pass ? "PASS" : "FAIL", index, name, v.detail);
  }
  std::cout << fmt::format("{}/{} criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
