#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <utility>

namespace linkfinger::linkage {

// Link and joint counts of the two-loop finger linkage.
inline constexpr int kFingerLinks = 6;
inline constexpr int kFingerJoints = 7;

// Closed interval of angles, radians.
struct AngleRange {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double angle) const { return angle >= lo && angle <= hi; }
};

// Lengths and fixed angles of the two serial four-bar loops.
//
// Loop 1 closes v1 + v2 + v4 = v3 with v2 at angle theta2, v1 at
// theta1 + theta2 and v4 fixed at theta4. Loop 2 closes v5 + v6 + v8 = v7
// with the same structure, driven by theta5 = theta2 + sigma.
struct LinkageGeometry {
  std::array<double, 8> v{};  // v[0] is v1, mm
  double sigma = 0.0;
  double rho = 0.0;
  double theta4_fixed = std::numbers::pi / 2;
  double theta8_fixed = std::numbers::pi / 2;
  AngleRange theta1_range;

  // Throws Error(kInvalidConfig) if lengths are not strictly positive and
  // finite, the input range is empty, or the implied mobility is not 1.
  void Validate() const;

  // Copy with every length multiplied by `factor`; angles unchanged.
  LinkageGeometry Scaled(double factor) const;
};

int ComputeMobility(int num_links, int num_joints);
int CountLoops(int num_joints, int num_links);

enum class LoopId { kFirst = 1, kSecond = 2 };

// Dimensionless coefficients of the loop-closure residual
//
//   r(in, out) = constant + sum_coeff * sin(in + out') + out_coeff * sin(out')
//                + cos(in),      out' = out - phase
//
// where `phase` is the fixed vector's offset from pi/2 (zero by default).
// Loop 1: sum_coeff = v4/v2, out_coeff = v4/v1,
//         constant = (v1^2 + v2^2 - v3^2 + v4^2) / (2 v1 v2).
struct LoopCoefficients {
  LoopId loop = LoopId::kFirst;
  double sum_coeff = 0.0;
  double out_coeff = 0.0;
  double constant = 0.0;
  double phase = 0.0;
};

// a t^2 + b t + c = 0 with t = tan(out' / 2).
struct QuadraticCoefficients {
  double quadratic = 0.0;
  double linear = 0.0;
  double constant = 0.0;

  double discriminant() const { return linear * linear - 4.0 * quadratic * constant; }
};

struct JointState {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;
  double theta5 = 0.0;
  double theta6 = 0.0;
  double theta7 = 0.0;
  double theta_mcp = 0.0;
  double theta_pip = 0.0;
  double theta_dip = 0.0;
};

enum class BranchMode { kPositiveRoot, kNegativeRoot, kContinuity };

struct BranchPolicy {
  BranchMode mode = BranchMode::kPositiveRoot;
  std::optional<JointState> previous;

  static BranchPolicy PositiveRoot() { return {BranchMode::kPositiveRoot, std::nullopt}; }
  static BranchPolicy NegativeRoot() { return {BranchMode::kNegativeRoot, std::nullopt}; }
  static BranchPolicy Continuity(const JointState& previous) {
    return {BranchMode::kContinuity, previous};
  }
};

// Wraps to (-pi, pi].
double WrapAngle(double angle);

LoopCoefficients ComputeLoopCoefficients(const LinkageGeometry& geometry, LoopId loop);
QuadraticCoefficients HalfAngleQuadratic(const LoopCoefficients& coeffs, double theta_in);

double LoopResidual(const LoopCoefficients& coeffs, double theta_in, double theta_out);
// Partial derivatives of LoopResidual.
double LoopResidualDIn(const LoopCoefficients& coeffs, double theta_in, double theta_out);
double LoopResidualDOut(const LoopCoefficients& coeffs, double theta_in, double theta_out);

// Both assembly branches of one loop. `positive` is the printed "+" root of
// the half-angle quadratic; it is also the root at which the residual
// crosses zero upward (dr/d(out) = sqrt(discriminant) / 2 > 0).
struct LoopRoots {
  double positive = 0.0;
  double negative = 0.0;
};

// Throws Error(kNoClosure) for a negative discriminant and
// Error(kDegenerateGeometry) when both a and b vanish.
LoopRoots SolveLoopRoots(const LoopCoefficients& coeffs, double theta_in);

// Continuity mode picks the root nearest the previous solution's output
// angle for the same loop (theta2 or theta6).
double SolveLoop(const LoopCoefficients& coeffs, double theta_in, const BranchPolicy& policy);

// Angle of the closing vector (theta3 or theta7) recovered from the X/Y
// closure components.
double ClosingVectorAngle(const LinkageGeometry& geometry, LoopId loop, double theta_in,
                          double theta_out);

// Fills the dependent and anatomical angles from theta1, theta2, theta6.
JointState AssembleState(const LinkageGeometry& geometry, double theta1, double theta2,
                         double theta6);

// Throws Error(kOutOfRange) if theta1 lies outside geometry.theta1_range.
JointState SolveChain(const LinkageGeometry& geometry, double theta1,
                      const BranchPolicy& policy = BranchPolicy::PositiveRoot());

// Residuals of both loops evaluated at a solved state.
std::pair<double, double> ChainResiduals(const LinkageGeometry& geometry, const JointState& state);

// Sensitivities of the dependent angles with respect to theta1 by implicit
// differentiation of both loop residuals.
struct ChainRates {
  double dtheta2 = 0.0;
  double dtheta6 = 0.0;
};

// Throws Error(kDegenerateGeometry) where dr/d(out) vanishes in either loop.
ChainRates ComputeChainRates(const LinkageGeometry& geometry, const JointState& state);

}  // namespace linkfinger::linkage
