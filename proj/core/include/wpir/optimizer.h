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

// Rate-leakage trade-off.
//
// Minimizing log2 sum_q max_m P(q|m)(z) subject to D(z) <= D_target over the
// probability simplex is, since log2 is monotone, the linear program
//
//   minimize    sum_q t_q
//   subject to  t_q >= P(q|m)(z)    for all q, m
//               D(z) <= D_target
//               sum_s z_s = 1,  z >= 0,
//
// whose optimal value v* gives the optimal leakage log2 v*.

#ifndef WPIR_OPTIMIZER_H_
#define WPIR_OPTIMIZER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "wpir/leakage.h"
#include "wpir/lp_solver.h"
#include "wpir/symmetry.h"

namespace wpir {

// The epigraph program over orbit values. Without symmetry reduction there
// is one variable per strategy and one per query.
struct LeakageProgram {
  LinearProgram lp;
  OrbitReduction reduction;
  size_t num_strategy_vars = 0;
  size_t num_query_vars = 0;
  double cost_target = 0.0;

  // Per-strategy PMF from a solution vector of `lp`.
  std::vector<double> ExpandPmf(std::span<const double> x) const;
};

// Builds the program for one server's table. Pass nullptr for no reduction.
// A target below the smallest achievable cost is reported as OutOfRange.
absl::StatusOr<LeakageProgram> Reformulate(const ConditionalQueryTable& table,
                                           const LinearForm& cost,
                                           double cost_target,
                                           const OrbitReduction* reduction);

// Same feasible set, but minimizes D(z) subject to sum_q t_q <= leakage_sum.
absl::StatusOr<LeakageProgram> ReformulateMinCost(
    const ConditionalQueryTable& table, const LinearForm& cost,
    double leakage_sum, const OrbitReduction* reduction);

struct LeakageSolution {
  LpSolution lp;
  // Renormalized per-strategy PMF.
  std::vector<double> z;
};

absl::StatusOr<LeakageSolution> SolveLeakageProgram(
    const LeakageProgram& program, const LpOptions& options = {});

struct TradeoffPoint {
  double cost_target = 0.0;
  double cost_achieved = 0.0;
  double leakage_bits = 0.0;
  double leakage_normalized = 0.0;
  double rate = 0.0;
  // Optimal value of the epigraph program, 2^leakage.
  double program_value = 0.0;
  double duality_gap = 0.0;
  std::vector<double> z;
};

struct SweepResult {
  // One entry per feasible target, in target order.
  std::vector<TradeoffPoint> by_target;
  std::vector<double> infeasible_targets;
  // Deduplicated (leakage, rate) points sorted by rate.
  std::vector<TradeoffPoint> curve;
};

class TradeoffOptimizer {
 public:
  struct Options {
    bool use_symmetry = true;
    // After the leakage solve, re-solve for the smallest cost that attains
    // the optimal leakage. The reported rate then sits on the curve.
    bool minimize_cost_at_optimum = true;
    LpOptions lp;
  };

  // `analysis` must outlive the optimizer. Fails unless every server sees
  // the same conditional distribution.
  static absl::StatusOr<TradeoffOptimizer> Create(
      const SchemeAnalysis& analysis, const Options& options);
  static absl::StatusOr<TradeoffOptimizer> Create(
      const SchemeAnalysis& analysis) {
    return Create(analysis, Options());
  }

  // Extreme values of D(z) over the simplex (attained at vertices).
  double min_cost() const { return min_cost_; }
  double max_cost() const { return max_cost_; }
  const OrbitReduction& reduction() const { return reduction_; }
  const SchemeAnalysis& analysis() const { return *analysis_; }

  absl::StatusOr<TradeoffPoint> Solve(double cost_target) const;

  // `size` evenly spaced targets from min_cost() to max_cost().
  std::vector<double> DefaultGrid(int size = 60) const;

  // Fails only if every target is infeasible.
  absl::StatusOr<SweepResult> Sweep(std::span<const double> targets) const;

 private:
  TradeoffOptimizer(const SchemeAnalysis* analysis, Options options,
                    OrbitReduction reduction, double min_cost, double max_cost)
      : analysis_(analysis),
        options_(std::move(options)),
        reduction_(std::move(reduction)),
        min_cost_(min_cost),
        max_cost_(max_cost) {}

  const SchemeAnalysis* analysis_;
  Options options_;
  OrbitReduction reduction_;
  double min_cost_;
  double max_cost_;
};

// Best rate among curve points whose normalized leakage is at most
// `normalized_leakage` (+ tol). Returns 0 if there is none.
double BestRateAtLeakage(std::span<const TradeoffPoint> curve,
                         double normalized_leakage, double tol = 1e-9);

struct GridSearchResult {
  double leakage_bits = 0.0;
  std::vector<double> z;
  uint64_t points = 0;
  uint64_t feasible_points = 0;
};

// Minimum of the leakage over the barycentric grid {c / divisions : c in
// N^|S|, sum c = divisions} restricted to D(z) <= cost_target. Independent of
// the LP path; used as an oracle.
absl::StatusOr<GridSearchResult> BruteForceMinLeakage(
    const ConditionalQueryTable& table, const LinearForm& cost,
    double cost_target, int divisions, uint64_t max_points = 50'000'000);

}  // namespace wpir

#endif  // WPIR_OPTIMIZER_H_
