#include "linkfinger/finger.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "linkfinger/error.hpp"

namespace linkfinger::finger {

namespace {

double Degrees(double radians) { return radians * 180.0 / std::numbers::pi; }

Point2 Rotate(Point2 p, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

void RequireSamples(int samples, const char* what) {
  if (samples < 2) {
    throw Error(ErrorKind::kInvalidConfig,
                fmt::format("{} needs at least 2 samples (got {})", what, samples));
  }
}

double Linspace(double lo, double hi, int samples, int index) {
  if (index == samples - 1) return hi;
  return lo + (hi - lo) * static_cast<double>(index) / static_cast<double>(samples - 1);
}

}  // namespace

void FingerGeometry::Validate() const {
  for (double length : phalanx) {
    if (!std::isfinite(length) || length <= 0.0) {
      throw Error(ErrorKind::kInvalidConfig,
                  fmt::format("phalanx lengths must be positive (got {})", length));
    }
  }
  if (!(orientation_range.lo <= orientation_range.hi)) {
    throw Error(ErrorKind::kInvalidConfig, "finger orientation range is empty");
  }
}

FingerGeometry FingerGeometry::Scaled(double factor) const {
  FingerGeometry scaled = *this;
  for (double& length : scaled.phalanx) length *= factor;
  scaled.base_offset = {base_offset.x * factor, base_offset.y * factor};
  return scaled;
}

void TendonModel::Validate() const {
  for (double arm : moment_arms) {
    if (!std::isfinite(arm) || arm < 0.0) {
      throw Error(ErrorKind::kInvalidConfig,
                  fmt::format("tendon moment arms must be non-negative (got {})", arm));
    }
  }
  if (!std::isfinite(max_tension) || max_tension <= 0.0) {
    throw Error(ErrorKind::kInvalidConfig, "tendon max tension must be positive");
  }
  if (kind == TendonKind::kSingle) {
    if (!(spring_stiffness > 0.0) || !(spring_preload >= 0.0)) {
      throw Error(ErrorKind::kInvalidConfig,
                  "single tendon needs a positive spring stiffness and non-negative preload");
    }
  } else if (spring_stiffness != 0.0 || spring_preload != 0.0) {
    throw Error(ErrorKind::kInvalidConfig, "double tendon must not carry spring terms");
  }
}

TendonModel TendonModel::WithKind(TendonKind other) const {
  TendonModel copy = *this;
  copy.kind = other;
  if (other == TendonKind::kDouble) {
    copy.spring_stiffness = 0.0;
    copy.spring_preload = 0.0;
  }
  return copy;
}

TipSample TipPosition(const FingerGeometry& finger, const JointState& state, double psi) {
  const std::array<double, 3> absolute = {
      state.theta_mcp,
      state.theta_mcp + state.theta_pip,
      state.theta_mcp + state.theta_pip + state.theta_dip,
  };
  Point2 planar;
  for (std::size_t i = 0; i < 3; ++i) {
    planar.x += finger.phalanx[i] * std::cos(absolute[i]);
    planar.y += finger.phalanx[i] * std::sin(absolute[i]);
  }
  const Point2 turned = Rotate(planar, psi);
  return TipSample{
      .theta1 = state.theta1,
      .psi = psi,
      .planar = planar,
      .gripper = {finger.base_offset.x + turned.x, finger.base_offset.y + turned.y},
  };
}

SweepSpec SweepSpec::FullRange(const LinkageGeometry& geometry, int samples) {
  return {geometry.theta1_range.lo, geometry.theta1_range.hi, samples};
}

double SweepSpec::at(int index) const { return Linspace(theta1_start, theta1_end, samples, index); }

std::vector<JointState> SweepStates(const LinkageGeometry& geometry, const SweepSpec& sweep) {
  RequireSamples(sweep.samples, "theta1 sweep");
  for (double end : {sweep.theta1_start, sweep.theta1_end}) {
    if (!geometry.theta1_range.contains(end)) {
      throw Error(ErrorKind::kOutOfRange,
                  fmt::format("sweep endpoint {} deg is outside [{}, {}] deg", Degrees(end),
                              Degrees(geometry.theta1_range.lo),
                              Degrees(geometry.theta1_range.hi)));
    }
  }
  std::vector<JointState> states;
  states.reserve(static_cast<std::size_t>(sweep.samples));
  for (int i = 0; i < sweep.samples; ++i) {
    const double theta1 = sweep.at(i);
    const auto policy = states.empty() ? linkage::BranchPolicy::PositiveRoot()
                                       : linkage::BranchPolicy::Continuity(states.back());
    try {
      states.push_back(linkage::SolveChain(geometry, theta1, policy));
    } catch (const Error& e) {
      throw Error(e.kind(),
                  fmt::format("sweep sample {} (theta1 = {} deg): {}", i, Degrees(theta1),
                              e.what()),
                  e.loop());
    }
  }
  return states;
}

std::vector<TipSample> TipTrace(const LinkageGeometry& geometry, const FingerGeometry& finger,
                                const SweepSpec& sweep, double psi) {
  std::vector<TipSample> trace;
  for (const JointState& state : SweepStates(geometry, sweep)) {
    trace.push_back(TipPosition(finger, state, psi));
  }
  return trace;
}

double TraceArcLength(const std::vector<TipSample>& trace) {
  double length = 0.0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    length += std::hypot(trace[i].planar.x - trace[i - 1].planar.x,
                         trace[i].planar.y - trace[i - 1].planar.y);
  }
  return length;
}

double DistanceToSegment(Point2 point, const Segment2& segment) {
  const double dx = segment.b.x - segment.a.x;
  const double dy = segment.b.y - segment.a.y;
  const double length_sq = dx * dx + dy * dy;
  double t = 0.0;
  if (length_sq > 0.0) {
    t = ((point.x - segment.a.x) * dx + (point.y - segment.a.y) * dy) / length_sq;
    t = std::clamp(t, 0.0, 1.0);
  }
  return std::hypot(point.x - (segment.a.x + t * dx), point.y - (segment.a.y + t * dy));
}

WorkspaceResult Workspace(const LinkageGeometry& geometry, const FingerGeometry& finger,
                          const Segment2& thumb_line, int theta1_samples, int psi_samples) {
  RequireSamples(psi_samples, "psi sweep");
  const std::vector<JointState> states =
      SweepStates(geometry, SweepSpec::FullRange(geometry, theta1_samples));
  WorkspaceResult result;
  result.cloud.reserve(states.size() * static_cast<std::size_t>(psi_samples));
  for (const JointState& state : states) {
    for (int j = 0; j < psi_samples; ++j) {
      const double psi =
          Linspace(finger.orientation_range.lo, finger.orientation_range.hi, psi_samples, j);
      result.cloud.push_back(TipPosition(finger, state, psi));
      const double width = DistanceToSegment(result.cloud.back().gripper, thumb_line);
      if (result.cloud.size() == 1 || width > result.max_opening_width) {
        result.max_opening_width = width;
        result.widest_index = result.cloud.size() - 1;
      }
    }
  }
  return result;
}

Excursion TendonExcursion(const TendonModel& tendon, const LinkageGeometry& geometry,
                          const JointState& state) {
  const JointState start = linkage::SolveChain(geometry, geometry.theta1_range.lo);
  const auto& r = tendon.moment_arms;
  Excursion excursion;
  excursion.length = r[0] * (state.theta_mcp - start.theta_mcp) +
                     r[1] * (state.theta_pip - start.theta_pip) +
                     r[2] * (state.theta_dip - start.theta_dip);
  const linkage::ChainRates rates = linkage::ComputeChainRates(geometry, state);
  excursion.rate = r[0] * rates.dtheta6 + r[1] * rates.dtheta2 + r[2];
  return excursion;
}

Point2 TipVelocity(const FingerGeometry& finger, const LinkageGeometry& geometry,
                   const JointState& state) {
  const linkage::ChainRates rates = linkage::ComputeChainRates(geometry, state);
  const std::array<double, 3> absolute = {
      state.theta_mcp,
      state.theta_mcp + state.theta_pip,
      state.theta_mcp + state.theta_pip + state.theta_dip,
  };
  const std::array<double, 3> absolute_rate = {
      rates.dtheta6,
      rates.dtheta6 + rates.dtheta2,
      rates.dtheta6 + rates.dtheta2 + 1.0,
  };
  Point2 velocity;
  for (std::size_t i = 0; i < 3; ++i) {
    velocity.x -= finger.phalanx[i] * std::sin(absolute[i]) * absolute_rate[i];
    velocity.y += finger.phalanx[i] * std::cos(absolute[i]) * absolute_rate[i];
  }
  return velocity;
}

double TipSpeed(const FingerGeometry& finger, const LinkageGeometry& geometry,
                const JointState& state) {
  const Point2 velocity = TipVelocity(finger, geometry, state);
  return std::hypot(velocity.x, velocity.y);
}

double SpringTorque(const TendonModel& tendon, const LinkageGeometry& geometry, double theta1) {
  if (tendon.kind == TendonKind::kDouble) return 0.0;
  return tendon.spring_preload + tendon.spring_stiffness * (theta1 - geometry.theta1_range.lo);
}

namespace {

double TipSpeedChecked(const FingerGeometry& finger, const LinkageGeometry& geometry,
                       const JointState& state) {
  const double speed = TipSpeed(finger, geometry, state);
  if (speed < 1e-9) {
    throw Error(ErrorKind::kDegenerateGeometry,
                fmt::format("tip does not move at theta1 = {} deg", Degrees(state.theta1)));
  }
  return speed;
}

}  // namespace

double StaticTipForce(const TendonModel& tendon, const LinkageGeometry& geometry,
                      const FingerGeometry& finger, const JointState& state, double tension) {
  if (!(tension >= 0.0) || tension > tendon.max_tension) {
    throw Error(ErrorKind::kOutOfRange, fmt::format("tension {} N is outside [0, {}] N", tension,
                                                    tendon.max_tension));
  }
  const double speed = TipSpeedChecked(finger, geometry, state);
  const double rate = TendonExcursion(tendon, geometry, state).rate;
  const double work = tension * rate - SpringTorque(tendon, geometry, state.theta1);
  return std::max(0.0, work / speed);
}

double StaticTipForce(const TendonModel& tendon, const LinkageGeometry& geometry,
                      const FingerGeometry& finger, double theta1, double tension) {
  return StaticTipForce(tendon, geometry, finger, linkage::SolveChain(geometry, theta1), tension);
}

double TensionForForce(const TendonModel& tendon, const LinkageGeometry& geometry,
                       const FingerGeometry& finger, const JointState& state, double force) {
  const double speed = TipSpeedChecked(finger, geometry, state);
  const double rate = TendonExcursion(tendon, geometry, state).rate;
  if (rate <= 0.0) {
    throw Error(ErrorKind::kDegenerateGeometry,
                fmt::format("tendon does not close the finger at theta1 = {} deg",
                            Degrees(state.theta1)));
  }
  return force * speed / rate;
}

double PreloadForForce(const TendonModel& tendon, const LinkageGeometry& geometry,
                       const FingerGeometry& finger, const JointState& state, double tension,
                       double force) {
  const double speed = TipSpeedChecked(finger, geometry, state);
  const double rate = TendonExcursion(tendon, geometry, state).rate;
  return tension * rate - force * speed -
         tendon.spring_stiffness * (state.theta1 - geometry.theta1_range.lo);
}

}  // namespace linkfinger::finger
