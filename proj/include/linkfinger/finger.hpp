#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "linkfinger/linkage.hpp"

namespace linkfinger::finger {

using linkage::AngleRange;
using linkage::JointState;
using linkage::LinkageGeometry;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Segment2 {
  Point2 a;
  Point2 b;
};

// Phalanx chain driven by the anatomical joint angles. The whole finger
// rotates by psi about the MCP axis, which sits at `base_offset` in the
// gripper frame.
struct FingerGeometry {
  std::array<double, 3> phalanx{};  // proximal, middle, distal; mm
  Point2 base_offset;
  AngleRange orientation_range;

  void Validate() const;
  FingerGeometry Scaled(double factor) const;
};

enum class TendonKind { kSingle, kDouble };

// Pulley-idealized tendon. The single-tendon finger opens on an extension
// spring, lumped here as a torsional return spring about theta1.
struct TendonModel {
  TendonKind kind = TendonKind::kDouble;
  std::array<double, 3> moment_arms{};  // r_mcp, r_pip, r_dip; mm
  double spring_stiffness = 0.0;        // N mm / rad
  double spring_preload = 0.0;          // N mm at theta1_range.lo
  double max_tension = 0.0;             // N

  void Validate() const;

  // Same routing with the other actuation variant. Switching to double drops
  // the spring; switching to single keeps whatever spring terms are set.
  TendonModel WithKind(TendonKind other) const;
};

struct TipSample {
  double theta1 = 0.0;
  double psi = 0.0;
  Point2 planar;   // finger plane, MCP axis at the origin
  Point2 gripper;  // base_offset + R(psi) * planar
};

TipSample TipPosition(const FingerGeometry& finger, const JointState& state, double psi);

// Evenly spaced theta1 samples, endpoints included.
struct SweepSpec {
  double theta1_start = 0.0;
  double theta1_end = 0.0;
  int samples = 2;

  static SweepSpec FullRange(const LinkageGeometry& geometry, int samples);
  double at(int index) const;
};

// Solves every sample, seeding with the positive root at the first sample
// and following the branch by continuity. Throws on the first sample that
// fails, naming its theta1.
std::vector<JointState> SweepStates(const LinkageGeometry& geometry, const SweepSpec& sweep);

std::vector<TipSample> TipTrace(const LinkageGeometry& geometry, const FingerGeometry& finger,
                                const SweepSpec& sweep, double psi);

double TraceArcLength(const std::vector<TipSample>& trace);

struct WorkspaceResult {
  std::vector<TipSample> cloud;  // theta1-major, psi-minor
  double max_opening_width = 0.0;
  std::size_t widest_index = 0;
};

double DistanceToSegment(Point2 point, const Segment2& segment);

WorkspaceResult Workspace(const LinkageGeometry& geometry, const FingerGeometry& finger,
                          const Segment2& thumb_line, int theta1_samples, int psi_samples);

struct Excursion {
  double length = 0.0;  // mm, relative to the theta1_range.lo configuration
  double rate = 0.0;    // mm / rad
};

Excursion TendonExcursion(const TendonModel& tendon, const LinkageGeometry& geometry,
                          const JointState& state);

// Planar tip velocity per unit theta1, mm / rad.
Point2 TipVelocity(const FingerGeometry& finger, const LinkageGeometry& geometry,
                   const JointState& state);
double TipSpeed(const FingerGeometry& finger, const LinkageGeometry& geometry,
                const JointState& state);

double SpringTorque(const TendonModel& tendon, const LinkageGeometry& geometry, double theta1);

// Contact force at the tip from virtual work:
//   F = max(0, (T dL/dtheta1 - tau_spring) / |ds_tip/dtheta1|).
double StaticTipForce(const TendonModel& tendon, const LinkageGeometry& geometry,
                      const FingerGeometry& finger, const JointState& state, double tension);
double StaticTipForce(const TendonModel& tendon, const LinkageGeometry& geometry,
                      const FingerGeometry& finger, double theta1, double tension);

// Inverse of the force model at one configuration: tension that makes the
// unsprung (double) finger push with `force`.
double TensionForForce(const TendonModel& tendon, const LinkageGeometry& geometry,
                       const FingerGeometry& finger, const JointState& state, double force);
// Spring preload that makes the single finger push with `force` at `tension`.
double PreloadForForce(const TendonModel& tendon, const LinkageGeometry& geometry,
                       const FingerGeometry& finger, const JointState& state, double tension,
                       double force);

}  // namespace linkfinger::finger
