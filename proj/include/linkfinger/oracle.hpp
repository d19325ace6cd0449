#pragma once

#include "linkfinger/linkage.hpp"

namespace linkfinger::linkage {

// Squared closure defect |va + vb + vd|^2 - vc^2 of one loop computed from
// the link vectors themselves, mm^2.
double RawClosureDefect(const LinkageGeometry& geometry, LoopId loop, double theta_in,
                        double theta_out);

// Solves one loop by scanning theta_out over (-pi, pi] on `grid_steps`
// cells and bisecting the cell where the raw defect crosses zero upward,
// which is the same assembly branch as the positive quadratic root.
// Throws Error(kNoClosure) when no upward crossing exists.
double SolveLoopNumeric(const LinkageGeometry& geometry, LoopId loop, double theta_in,
                        int grid_steps = 7200);

// Validation oracle for SolveChain on the positive branch. Never touches
// the half-angle quadratic.
JointState SolveChainNumeric(const LinkageGeometry& geometry, double theta1,
                             int grid_steps = 7200);

}  // namespace linkfinger::linkage
