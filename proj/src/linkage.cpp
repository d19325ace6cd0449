#include "linkfinger/linkage.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "linkfinger/error.hpp"

namespace linkfinger::linkage {

namespace {

constexpr double kPi = std::numbers::pi;

double Degrees(double radians) { return radians * 180.0 / kPi; }

int LoopNumber(LoopId loop) { return static_cast<int>(loop); }

double AngularDistance(double a, double b) { return std::abs(WrapAngle(a - b)); }

}  // namespace

void LinkageGeometry::Validate() const {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] <= 0.0) {
      throw Error(ErrorKind::kInvalidConfig,
                  fmt::format("link length v{} must be positive and finite (got {})", i + 1, v[i]));
    }
  }
  for (double angle : {sigma, rho, theta4_fixed, theta8_fixed, theta1_range.lo, theta1_range.hi}) {
    if (!std::isfinite(angle)) {
      throw Error(ErrorKind::kInvalidConfig, "geometry angles must be finite");
    }
  }
  if (theta1_range.lo > theta1_range.hi) {
    throw Error(ErrorKind::kInvalidConfig,
                fmt::format("theta1 range is empty ([{}, {}] deg)", Degrees(theta1_range.lo),
                            Degrees(theta1_range.hi)));
  }
  const int mobility = ComputeMobility(kFingerLinks, kFingerJoints);
  if (mobility != 1) {
    throw Error(ErrorKind::kInvalidConfig,
                fmt::format("linkage mobility is {}, expected 1", mobility));
  }
}

LinkageGeometry LinkageGeometry::Scaled(double factor) const {
  LinkageGeometry scaled = *this;
  for (double& length : scaled.v) length *= factor;
  return scaled;
}

int ComputeMobility(int num_links, int num_joints) { return 3 * (num_links - 1) - 2 * num_joints; }

int CountLoops(int num_joints, int num_links) { return num_joints - num_links + 1; }

double WrapAngle(double angle) {
  double wrapped = std::remainder(angle, 2.0 * kPi);
  if (wrapped <= -kPi) wrapped += 2.0 * kPi;
  return wrapped;
}

LoopCoefficients ComputeLoopCoefficients(const LinkageGeometry& geometry, LoopId loop) {
  // Loop 2 reuses loop 1's formulas with v5..v8 in place of v1..v4.
  const std::size_t base = loop == LoopId::kFirst ? 0 : 4;
  const double a = geometry.v[base];
  const double b = geometry.v[base + 1];
  const double c = geometry.v[base + 2];
  const double d = geometry.v[base + 3];
  if (a == 0.0 || b == 0.0) {
    throw Error(ErrorKind::kDegenerateGeometry,
                fmt::format("loop {} has a zero-length driving link", LoopNumber(loop)),
                LoopNumber(loop));
  }
  const double fixed = loop == LoopId::kFirst ? geometry.theta4_fixed : geometry.theta8_fixed;
  return LoopCoefficients{
      .loop = loop,
      .sum_coeff = d / b,
      .out_coeff = d / a,
      .constant = (a * a + b * b - c * c + d * d) / (2.0 * a * b),
      .phase = fixed - kPi / 2,
  };
}

QuadraticCoefficients HalfAngleQuadratic(const LoopCoefficients& k, double theta_in) {
  const double c = std::cos(theta_in);
  const double s = std::sin(theta_in);
  return QuadraticCoefficients{
      .quadratic = c - k.sum_coeff * s + k.constant,
      .linear = 2.0 * k.sum_coeff * c + 2.0 * k.out_coeff,
      .constant = c + k.sum_coeff * s + k.constant,
  };
}

double LoopResidual(const LoopCoefficients& k, double theta_in, double theta_out) {
  const double out = theta_out - k.phase;
  return k.constant + k.sum_coeff * std::sin(theta_in + out) + k.out_coeff * std::sin(out) +
         std::cos(theta_in);
}

double LoopResidualDIn(const LoopCoefficients& k, double theta_in, double theta_out) {
  const double out = theta_out - k.phase;
  return k.sum_coeff * std::cos(theta_in + out) - std::sin(theta_in);
}

double LoopResidualDOut(const LoopCoefficients& k, double theta_in, double theta_out) {
  const double out = theta_out - k.phase;
  return k.sum_coeff * std::cos(theta_in + out) + k.out_coeff * std::cos(out);
}

LoopRoots SolveLoopRoots(const LoopCoefficients& k, double theta_in) {
  const int loop = LoopNumber(k.loop);
  const QuadraticCoefficients q = HalfAngleQuadratic(k, theta_in);
  if (q.quadratic == 0.0 && q.linear == 0.0) {
    throw Error(ErrorKind::kDegenerateGeometry,
                fmt::format("loop {} quadratic vanishes at input {} deg", loop, Degrees(theta_in)),
                loop);
  }
  const double disc = q.discriminant();
  if (!(disc >= 0.0)) {
    throw Error(ErrorKind::kNoClosure,
                fmt::format("loop {} cannot close at input {} deg (discriminant {})", loop,
                            Degrees(theta_in), disc),
                loop);
  }
  const double root = std::sqrt(disc);
  // t+ = (-b + root) / 2a = 2c / (-b - root), and likewise for t-. Each root
  // is taken from whichever form avoids cancellation; the tangent is fed to
  // atan2 as a ratio so a = 0 yields the linear root -c/b or the root at pi.
  double positive;
  double negative;
  if (q.linear >= 0.0) {
    positive = 2.0 * std::atan2(2.0 * q.constant, -q.linear - root);
    negative = 2.0 * std::atan2(-q.linear - root, 2.0 * q.quadratic);
  } else {
    positive = 2.0 * std::atan2(-q.linear + root, 2.0 * q.quadratic);
    negative = 2.0 * std::atan2(2.0 * q.constant, -q.linear + root);
  }
  return LoopRoots{WrapAngle(positive + k.phase), WrapAngle(negative + k.phase)};
}

double SolveLoop(const LoopCoefficients& coeffs, double theta_in, const BranchPolicy& policy) {
  const LoopRoots roots = SolveLoopRoots(coeffs, theta_in);
  switch (policy.mode) {
    case BranchMode::kPositiveRoot:
      return roots.positive;
    case BranchMode::kNegativeRoot:
      return roots.negative;
    case BranchMode::kContinuity: {
      if (!policy.previous) {
        throw std::invalid_argument("continuity branch policy requires a previous solution");
      }
      const double previous =
          coeffs.loop == LoopId::kFirst ? policy.previous->theta2 : policy.previous->theta6;
      return AngularDistance(roots.positive, previous) <= AngularDistance(roots.negative, previous)
                 ? roots.positive
                 : roots.negative;
    }
  }
  throw std::logic_error("unhandled branch mode");
}

double ClosingVectorAngle(const LinkageGeometry& geometry, LoopId loop, double theta_in,
                          double theta_out) {
  const std::size_t base = loop == LoopId::kFirst ? 0 : 4;
  const double fixed = loop == LoopId::kFirst ? geometry.theta4_fixed : geometry.theta8_fixed;
  const double x = geometry.v[base] * std::sin(theta_in + theta_out) +
                   geometry.v[base + 1] * std::sin(theta_out) +
                   geometry.v[base + 3] * std::sin(fixed);
  const double y = geometry.v[base] * std::cos(theta_in + theta_out) +
                   geometry.v[base + 1] * std::cos(theta_out) +
                   geometry.v[base + 3] * std::cos(fixed);
  return WrapAngle(std::atan2(x, y));
}

JointState AssembleState(const LinkageGeometry& geometry, double theta1, double theta2,
                         double theta6) {
  JointState state;
  state.theta1 = theta1;
  state.theta2 = theta2;
  state.theta5 = theta2 + geometry.sigma;
  state.theta6 = theta6;
  state.theta3 = ClosingVectorAngle(geometry, LoopId::kFirst, theta1, theta2);
  state.theta7 = ClosingVectorAngle(geometry, LoopId::kSecond, state.theta5, theta6);
  state.theta_mcp = state.theta6;
  state.theta_pip = state.theta5 - geometry.sigma;
  state.theta_dip = state.theta1 - geometry.rho;
  return state;
}

JointState SolveChain(const LinkageGeometry& geometry, double theta1, const BranchPolicy& policy) {
  if (!geometry.theta1_range.contains(theta1)) {
    throw Error(ErrorKind::kOutOfRange,
                fmt::format("theta1 = {} deg is outside [{}, {}] deg", Degrees(theta1),
                            Degrees(geometry.theta1_range.lo), Degrees(geometry.theta1_range.hi)));
  }
  const LoopCoefficients first = ComputeLoopCoefficients(geometry, LoopId::kFirst);
  const LoopCoefficients second = ComputeLoopCoefficients(geometry, LoopId::kSecond);
  const double theta2 = SolveLoop(first, theta1, policy);
  const double theta6 = SolveLoop(second, theta2 + geometry.sigma, policy);
  return AssembleState(geometry, theta1, theta2, theta6);
}

std::pair<double, double> ChainResiduals(const LinkageGeometry& geometry,
                                         const JointState& state) {
  const LoopCoefficients first = ComputeLoopCoefficients(geometry, LoopId::kFirst);
  const LoopCoefficients second = ComputeLoopCoefficients(geometry, LoopId::kSecond);
  return {LoopResidual(first, state.theta1, state.theta2),
          LoopResidual(second, state.theta5, state.theta6)};
}

ChainRates ComputeChainRates(const LinkageGeometry& geometry, const JointState& state) {
  const LoopCoefficients first = ComputeLoopCoefficients(geometry, LoopId::kFirst);
  const LoopCoefficients second = ComputeLoopCoefficients(geometry, LoopId::kSecond);

  const double d_out1 = LoopResidualDOut(first, state.theta1, state.theta2);
  if (d_out1 == 0.0) {
    throw Error(ErrorKind::kDegenerateGeometry,
                fmt::format("loop 1 is singular at theta1 = {} deg", Degrees(state.theta1)), 1);
  }
  const double d_out2 = LoopResidualDOut(second, state.theta5, state.theta6);
  if (d_out2 == 0.0) {
    throw Error(ErrorKind::kDegenerateGeometry,
                fmt::format("loop 2 is singular at theta1 = {} deg", Degrees(state.theta1)), 2);
  }
  ChainRates rates;
  rates.dtheta2 = -LoopResidualDIn(first, state.theta1, state.theta2) / d_out1;
  rates.dtheta6 = -LoopResidualDIn(second, state.theta5, state.theta6) / d_out2 * rates.dtheta2;
  return rates;
}

}  // namespace linkfinger::linkage
