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

#include "wpir/lp_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wpir {

absl::string_view LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration-limit";
  }
  return "unknown";
}

namespace {

constexpr int kArtificial = -1;

// Dictionary tableau for: maximize c^T x subject to A x <= b, x >= 0.
//
// Row i < rows holds  x_{basic[i]} = T[i][rhs] - sum_j T[i][j] x_{nonbasic[j]}.
// Row `rows` is the objective (entries are negated reduced costs), row
// `rows + 1` the phase-1 objective. Column `cols` belongs to the artificial
// variable and column `cols + 1` is the right-hand side. Variable labels:
// [0, cols) structural, [cols, cols + rows) slacks, -1 artificial.
class Tableau {
 public:
  Tableau(size_t rows, size_t cols, const LpOptions& options)
      : rows_(rows),
        cols_(cols),
        stride_(cols + 2),
        cells_((rows + 2) * (cols + 2), 0.0),
        basic_(rows),
        nonbasic_(cols + 1),
        options_(options) {
    for (size_t i = 0; i < rows; ++i) {
      basic_[i] = static_cast<int>(cols + i);
      at(i, cols) = -1.0;
    }
    for (size_t j = 0; j < cols; ++j) nonbasic_[j] = static_cast<int>(j);
    nonbasic_[cols] = kArtificial;
    at(rows + 1, cols) = 1.0;
  }

  double& at(size_t r, size_t c) { return cells_[r * stride_ + c]; }
  double at(size_t r, size_t c) const { return cells_[r * stride_ + c]; }
  size_t rhs() const { return cols_ + 1; }

  // Returns the status after driving the chosen objective row to optimality.
  LpStatus Optimize(bool feasibility_phase) {
    const size_t objective_row = feasibility_phase ? rows_ + 1 : rows_;
    const double eps = options_.tolerance;
    bool bland = false;
    size_t degenerate_run = 0;
    while (true) {
      if (iterations_ >= options_.max_iterations) {
        return LpStatus::kIterationLimit;
      }
      // Entering column.
      size_t enter = cols_ + 1;
      for (size_t j = 0; j <= cols_; ++j) {
        if (!feasibility_phase && nonbasic_[j] == kArtificial) continue;
        double d = at(objective_row, j);
        if (d >= -eps) continue;
        if (enter == cols_ + 1) {
          enter = j;
        } else if (bland) {
          if (nonbasic_[j] < nonbasic_[enter]) enter = j;
        } else {
          double best = at(objective_row, enter);
          if (d < best || (d == best && nonbasic_[j] < nonbasic_[enter])) {
            enter = j;
          }
        }
      }
      if (enter == cols_ + 1) return LpStatus::kOptimal;

      // Leaving row: minimum ratio, ties to the smallest basic label.
      size_t leave = rows_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < rows_; ++i) {
        double a = at(i, enter);
        if (a <= eps) continue;
        double ratio = at(i, rhs()) / a;
        double tie = 1e-12 * std::max(1.0, std::abs(best_ratio));
        if (leave == rows_ || ratio < best_ratio - tie) {
          leave = i;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + tie && basic_[i] < basic_[leave]) {
          leave = i;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
      if (leave == rows_) return LpStatus::kUnbounded;
      if (best_ratio <= eps) {
        if (++degenerate_run > options_.degenerate_pivots_before_bland) {
          bland = true;
        }
      } else {
        degenerate_run = 0;
      }
      Pivot(leave, enter);
    }
  }

  void Pivot(size_t r, size_t s) {
    ++iterations_;
    const double inv = 1.0 / at(r, s);
    double* pivot_row = &cells_[r * stride_];
    for (size_t i = 0; i < rows_ + 2; ++i) {
      if (i == r) continue;
      double* row = &cells_[i * stride_];
      const double factor = row[s] * inv;
      if (factor == 0.0) continue;
      for (size_t j = 0; j < stride_; ++j) row[j] -= pivot_row[j] * factor;
      row[s] = -factor;
    }
    for (size_t j = 0; j < stride_; ++j) pivot_row[j] *= inv;
    pivot_row[s] = inv;
    std::swap(basic_[r], nonbasic_[s]);
  }

  // Phase 1. Returns false if the constraints admit no x >= 0.
  bool MakeFeasible() {
    size_t worst = 0;
    for (size_t i = 1; i < rows_; ++i) {
      if (at(i, rhs()) < at(worst, rhs())) worst = i;
    }
    if (rows_ == 0 || at(worst, rhs()) >= -options_.tolerance) return true;
    Pivot(worst, cols_);
    LpStatus status = Optimize(/*feasibility_phase=*/true);
    if (status != LpStatus::kOptimal) return false;
    if (at(rows_ + 1, rhs()) < -options_.tolerance * 10) return false;
    // Drive the artificial variable out of the basis if it is still there.
    for (size_t i = 0; i < rows_; ++i) {
      if (basic_[i] != kArtificial) continue;
      size_t best = cols_ + 1;
      for (size_t j = 0; j <= cols_; ++j) {
        if (std::abs(at(i, j)) <= options_.tolerance) continue;
        if (best == cols_ + 1 || std::abs(at(i, j)) > std::abs(at(i, best))) {
          best = j;
        }
      }
      if (best != cols_ + 1) Pivot(i, best);
    }
    return true;
  }

  const std::vector<int>& basic() const { return basic_; }
  const std::vector<int>& nonbasic() const { return nonbasic_; }
  size_t iterations() const { return iterations_; }

 private:
  size_t rows_;
  size_t cols_;
  size_t stride_;
  std::vector<double> cells_;
  std::vector<int> basic_;
  std::vector<int> nonbasic_;
  LpOptions options_;
  size_t iterations_ = 0;
};

struct InternalRow {
  size_t source;
  double sign;  // +1 if the row is the source row as written, -1 if negated
};

}  // namespace

LpSolution SolveLp(const LinearProgram& program, const LpOptions& options) {
  const size_t n = program.num_variables;
  // Expand into A x <= b rows.
  std::vector<InternalRow> layout;
  for (size_t c = 0; c < program.constraints.size(); ++c) {
    switch (program.constraints[c].sense) {
      case ConstraintSense::kLessEqual:
        layout.push_back({c, 1.0});
        break;
      case ConstraintSense::kGreaterEqual:
        layout.push_back({c, -1.0});
        break;
      case ConstraintSense::kEqual:
        layout.push_back({c, 1.0});
        layout.push_back({c, -1.0});
        break;
    }
  }
  const size_t m = layout.size();
  Tableau tableau(m, n, options);
  for (size_t i = 0; i < m; ++i) {
    const LpConstraint& row = program.constraints[layout[i].source];
    for (const auto& [var, coefficient] : row.terms) {
      tableau.at(i, var) += layout[i].sign * coefficient;
    }
    tableau.at(i, n + 1) = layout[i].sign * row.rhs;
  }
  for (size_t j = 0; j < n && j < program.objective.size(); ++j) {
    // Maximize -c^T x: the objective row stores -(-c_j).
    tableau.at(m, j) = program.objective[j];
  }

  LpSolution out;
  if (!tableau.MakeFeasible()) {
    out.status = LpStatus::kInfeasible;
    out.iterations = tableau.iterations();
    return out;
  }
  out.status = tableau.Optimize(/*feasibility_phase=*/false);
  out.iterations = tableau.iterations();
  if (out.status != LpStatus::kOptimal) return out;

  out.x.assign(n, 0.0);
  for (size_t i = 0; i < m; ++i) {
    int label = tableau.basic()[i];
    if (label >= 0 && static_cast<size_t>(label) < n) {
      out.x[label] = std::max(0.0, tableau.at(i, n + 1));
    }
  }
  // Internal duals are the reduced costs of the nonbasic slacks.
  std::vector<double> internal_dual(m, 0.0);
  for (size_t j = 0; j <= n; ++j) {
    int label = tableau.nonbasic()[j];
    if (label >= static_cast<int>(n)) {
      internal_dual[label - n] = tableau.at(m, j);
    }
  }
  out.duals.assign(program.constraints.size(), 0.0);
  double dual_objective = 0.0;
  for (size_t i = 0; i < m; ++i) {
    // Minimization dual: y = -sign * internal dual.
    double y = -layout[i].sign * internal_dual[i];
    out.duals[layout[i].source] += y;
    dual_objective += y * program.constraints[layout[i].source].rhs;
  }

  out.objective = 0.0;
  for (size_t j = 0; j < n && j < program.objective.size(); ++j) {
    out.objective += program.objective[j] * out.x[j];
  }
  out.duality_gap = std::abs(out.objective - dual_objective);

  double violation = 0.0;
  for (const LpConstraint& row : program.constraints) {
    double lhs = 0.0;
    for (const auto& [var, coefficient] : row.terms) {
      lhs += coefficient * out.x[var];
    }
    double v = 0.0;
    switch (row.sense) {
      case ConstraintSense::kLessEqual:
        v = lhs - row.rhs;
        break;
      case ConstraintSense::kGreaterEqual:
        v = row.rhs - lhs;
        break;
      case ConstraintSense::kEqual:
        v = std::abs(lhs - row.rhs);
        break;
    }
    violation = std::max(violation, v);
  }
  out.max_violation = violation;
  return out;
}

}  // namespace wpir
