#include "linkfinger/oracle.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "linkfinger/error.hpp"

namespace linkfinger::linkage {

double RawClosureDefect(const LinkageGeometry& geometry, LoopId loop, double theta_in,
                        double theta_out) {
  const std::size_t base = loop == LoopId::kFirst ? 0 : 4;
  const double fixed = loop == LoopId::kFirst ? geometry.theta4_fixed : geometry.theta8_fixed;
  const double x = geometry.v[base] * std::sin(theta_in + theta_out) +
                   geometry.v[base + 1] * std::sin(theta_out) +
                   geometry.v[base + 3] * std::sin(fixed);
  const double y = geometry.v[base] * std::cos(theta_in + theta_out) +
                   geometry.v[base + 1] * std::cos(theta_out) +
                   geometry.v[base + 3] * std::cos(fixed);
  const double closing = geometry.v[base + 2];
  return x * x + y * y - closing * closing;
}

double SolveLoopNumeric(const LinkageGeometry& geometry, LoopId loop, double theta_in,
                        int grid_steps) {
  constexpr double kPi = std::numbers::pi;
  const auto defect = [&](double theta) {
    return RawClosureDefect(geometry, loop, theta_in, theta);
  };
  const double step = 2.0 * kPi / grid_steps;
  double lower = -kPi;
  double f_lower = defect(lower);
  for (int k = 1; k <= grid_steps; ++k) {
    const double upper = k == grid_steps ? kPi : -kPi + k * step;
    const double f_upper = defect(upper);
    if (f_lower < 0.0 && f_upper >= 0.0) {
      if (f_upper == 0.0) return upper;
      std::uintmax_t max_iter = 128;
      const auto [a, b] = boost::math::tools::bisect(
          defect, lower, upper, boost::math::tools::eps_tolerance<double>(52), max_iter);
      const double root = 0.5 * (a + b);
      return root > kPi ? root - 2.0 * kPi : root;
    }
    lower = upper;
    f_lower = f_upper;
  }
  throw Error(ErrorKind::kNoClosure,
              fmt::format("loop {} has no closing configuration at input {} deg (numeric scan)",
                          static_cast<int>(loop), theta_in * 180.0 / kPi),
              static_cast<int>(loop));
}

JointState SolveChainNumeric(const LinkageGeometry& geometry, double theta1, int grid_steps) {
  if (!geometry.theta1_range.contains(theta1)) {
    throw Error(ErrorKind::kOutOfRange,
                fmt::format("theta1 = {} deg is outside the admissible range",
                            theta1 * 180.0 / std::numbers::pi));
  }
  const double theta2 = SolveLoopNumeric(geometry, LoopId::kFirst, theta1, grid_steps);
  const double theta6 =
      SolveLoopNumeric(geometry, LoopId::kSecond, theta2 + geometry.sigma, grid_steps);
  return AssembleState(geometry, theta1, theta2, theta6);
}

}  // namespace linkfinger::linkage
