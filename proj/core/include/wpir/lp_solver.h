// Copyright 2026 The wpir Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense-tableau primal simplex for small linear programs
//
//   minimize    c^T x
//   subject to  a_i^T x {<=, >=, =} b_i,   x >= 0.
//
// Phase 1 uses a single artificial variable. Pricing is Dantzig's rule;
// after a run of degenerate pivots the solver switches to Bland's rule,
// which cannot cycle. Ties in the ratio test always go to the smallest
// variable label.

#ifndef WPIR_LP_SOLVER_H_
#define WPIR_LP_SOLVER_H_

#include <cstddef>
#include <utility>
#include <vector>

#include "absl/strings/string_view.h"

namespace wpir {

enum class ConstraintSense { kLessEqual, kGreaterEqual, kEqual };

struct LpConstraint {
  std::vector<std::pair<size_t, double>> terms;
  ConstraintSense sense = ConstraintSense::kLessEqual;
  double rhs = 0.0;
};

struct LinearProgram {
  size_t num_variables = 0;
  // Minimized. Missing entries are zero.
  std::vector<double> objective;
  std::vector<LpConstraint> constraints;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

absl::string_view LpStatusName(LpStatus status);

struct LpOptions {
  double tolerance = 1e-9;
  size_t max_iterations = 2'000'000;
  size_t degenerate_pivots_before_bland = 64;
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
  // One multiplier per constraint, sign convention of the minimization
  // dual: y_i >= 0 for >=, y_i <= 0 for <=, free for =.
  std::vector<double> duals;
  // |primal objective - dual objective| at the returned basis.
  double duality_gap = 0.0;
  // Largest constraint or bound violation of x.
  double max_violation = 0.0;
  size_t iterations = 0;
};

LpSolution SolveLp(const LinearProgram& program, const LpOptions& options = {});

}  // namespace wpir

#endif  // WPIR_LP_SOLVER_H_
