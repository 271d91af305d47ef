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

#include "wpir/optimizer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "wpir/status_macros.h"

namespace wpir {
namespace {

// Smallest D over the simplex: the cheapest pure strategy.
double MinVertexCost(const LinearForm& cost, size_t num_strategies) {
  double best = std::numeric_limits<double>::infinity();
  for (size_t s = 0; s < num_strategies; ++s) {
    best = std::min(best, ToDouble(cost.Coefficient(s)));
  }
  return best + ToDouble(cost.constant());
}

double MaxVertexCost(const LinearForm& cost, size_t num_strategies) {
  double best = -std::numeric_limits<double>::infinity();
  for (size_t s = 0; s < num_strategies; ++s) {
    best = std::max(best, ToDouble(cost.Coefficient(s)));
  }
  return best + ToDouble(cost.constant());
}

// Sums a form's coefficients per strategy orbit.
std::vector<std::pair<size_t, double>> OrbitTerms(
    const LinearForm& form, const OrbitReduction& reduction,
    std::vector<double>& scratch) {
  std::vector<size_t> touched;
  for (const auto& [s, c] : form.terms()) {
    size_t orbit = reduction.strategy_orbit[s];
    if (scratch[orbit] == 0.0) touched.push_back(orbit);
    scratch[orbit] += ToDouble(c);
  }
  std::sort(touched.begin(), touched.end());
  std::vector<std::pair<size_t, double>> out;
  out.reserve(touched.size());
  for (size_t orbit : touched) {
    if (scratch[orbit] != 0.0) out.emplace_back(orbit, scratch[orbit]);
    scratch[orbit] = 0.0;
  }
  return out;
}

// Variables and the constraints shared by both programs: epigraph rows and
// the normalization. Appends nothing about the cost.
LeakageProgram BuildEpigraph(const ConditionalQueryTable& table,
                             const OrbitReduction& reduction) {
  LeakageProgram p;
  p.reduction = reduction;
  p.num_strategy_vars = reduction.num_strategy_orbits();
  p.num_query_vars = reduction.num_query_orbits();
  p.lp.num_variables = p.num_strategy_vars + p.num_query_vars;
  p.lp.objective.assign(p.lp.num_variables, 0.0);

  std::vector<double> scratch(p.num_strategy_vars, 0.0);
  for (size_t orbit = 0; orbit < p.num_query_vars; ++orbit) {
    size_t q = reduction.query_representative[orbit];
    size_t t_var = p.num_strategy_vars + orbit;
    for (int m = 1; m <= table.num_files(); ++m) {
      const LinearForm& form = table.conditional(q, m);
      if (form.IsZero()) continue;
      LpConstraint row;
      row.terms = OrbitTerms(form, reduction, scratch);
      row.terms.emplace_back(t_var, -1.0);
      row.sense = ConstraintSense::kLessEqual;
      row.rhs = 0.0;
      p.lp.constraints.push_back(std::move(row));
    }
  }
  LpConstraint normalization;
  for (size_t orbit = 0; orbit < p.num_strategy_vars; ++orbit) {
    normalization.terms.emplace_back(
        orbit, static_cast<double>(reduction.strategy_orbit_size[orbit]));
  }
  normalization.sense = ConstraintSense::kEqual;
  normalization.rhs = 1.0;
  p.lp.constraints.push_back(std::move(normalization));
  return p;
}

absl::Status CheckReduction(const ConditionalQueryTable& table,
                            const OrbitReduction& reduction) {
  if (reduction.strategy_orbit.size() != table.num_strategies() ||
      reduction.query_orbit.size() != table.size()) {
    return absl::InvalidArgumentError(
        "orbit reduction does not match the query table");
  }
  return absl::OkStatus();
}

}  // namespace

std::vector<double> LeakageProgram::ExpandPmf(
    std::span<const double> x) const {
  std::vector<double> z(reduction.strategy_orbit.size(), 0.0);
  double total = 0.0;
  for (size_t s = 0; s < z.size(); ++s) {
    z[s] = std::max(0.0, x[reduction.strategy_orbit[s]]);
    total += z[s];
  }
  if (total > 0.0) {
    for (double& v : z) v /= total;
  }
  return z;
}

absl::StatusOr<LeakageProgram> Reformulate(const ConditionalQueryTable& table,
                                           const LinearForm& cost,
                                           double cost_target,
                                           const OrbitReduction* reduction) {
  OrbitReduction trivial;
  if (reduction == nullptr) {
    trivial = TrivialReduction(table);
    reduction = &trivial;
  }
  WPIR_RETURN_IF_ERROR(CheckReduction(table, *reduction));
  double floor = MinVertexCost(cost, table.num_strategies());
  if (cost_target < floor - 1e-9) {
    return absl::OutOfRangeError(absl::StrFormat(
        "infeasible: download cost target %.12g is below the minimum %.12g",
        cost_target, floor));
  }
  LeakageProgram p = BuildEpigraph(table, *reduction);
  p.cost_target = cost_target;
  for (size_t orbit = 0; orbit < p.num_query_vars; ++orbit) {
    p.lp.objective[p.num_strategy_vars + orbit] =
        static_cast<double>(reduction->query_orbit_size[orbit]);
  }
  std::vector<double> scratch(p.num_strategy_vars, 0.0);
  LpConstraint budget;
  budget.terms = OrbitTerms(cost, *reduction, scratch);
  budget.sense = ConstraintSense::kLessEqual;
  budget.rhs = cost_target - ToDouble(cost.constant());
  p.lp.constraints.push_back(std::move(budget));
  return p;
}

absl::StatusOr<LeakageProgram> ReformulateMinCost(
    const ConditionalQueryTable& table, const LinearForm& cost,
    double leakage_sum, const OrbitReduction* reduction) {
  OrbitReduction trivial;
  if (reduction == nullptr) {
    trivial = TrivialReduction(table);
    reduction = &trivial;
  }
  WPIR_RETURN_IF_ERROR(CheckReduction(table, *reduction));
  LeakageProgram p = BuildEpigraph(table, *reduction);
  std::vector<double> scratch(p.num_strategy_vars, 0.0);
  for (const auto& [orbit, c] : OrbitTerms(cost, *reduction, scratch)) {
    p.lp.objective[orbit] = c;
  }
  LpConstraint bound;
  for (size_t orbit = 0; orbit < p.num_query_vars; ++orbit) {
    bound.terms.emplace_back(
        p.num_strategy_vars + orbit,
        static_cast<double>(reduction->query_orbit_size[orbit]));
  }
  bound.sense = ConstraintSense::kLessEqual;
  bound.rhs = leakage_sum;
  p.lp.constraints.push_back(std::move(bound));
  return p;
}

absl::StatusOr<LeakageSolution> SolveLeakageProgram(
    const LeakageProgram& program, const LpOptions& options) {
  LeakageSolution out;
  out.lp = SolveLp(program.lp, options);
  switch (out.lp.status) {
    case LpStatus::kOptimal:
      break;
    case LpStatus::kInfeasible:
      return absl::OutOfRangeError("infeasible leakage program");
    default:
      return absl::InternalError(absl::StrFormat(
          "simplex stopped with status %s after %d pivots",
          LpStatusName(out.lp.status), out.lp.iterations));
  }
  out.z = program.ExpandPmf(out.lp.x);
  return out;
}

absl::StatusOr<TradeoffOptimizer> TradeoffOptimizer::Create(
    const SchemeAnalysis& analysis, const Options& options) {
  if (!analysis.ServersIdentical()) {
    return absl::FailedPreconditionError(
        "servers observe different query distributions; the scheme is not "
        "time-shared");
  }
  const ConditionalQueryTable& table = analysis.table(1);
  OrbitReduction reduction =
      options.use_symmetry
          ? ReduceBySymmetry(table, analysis.cost(),
                             CandidateSymmetries(analysis.scheme()))
          : TrivialReduction(table);
  return TradeoffOptimizer(
      &analysis, options, std::move(reduction),
      MinVertexCost(analysis.cost(), table.num_strategies()),
      MaxVertexCost(analysis.cost(), table.num_strategies()));
}

absl::StatusOr<TradeoffPoint> TradeoffOptimizer::Solve(
    double cost_target) const {
  const ConditionalQueryTable& table = analysis_->table(1);
  const LinearForm& cost = analysis_->cost();
  WPIR_ASSIGN_OR_RETURN(LeakageProgram program,
                        Reformulate(table, cost, cost_target, &reduction_));
  WPIR_ASSIGN_OR_RETURN(LeakageSolution solution,
                        SolveLeakageProgram(program, options_.lp));

  TradeoffPoint point;
  point.cost_target = cost_target;
  point.program_value = solution.lp.objective;
  point.duality_gap = solution.lp.duality_gap;
  point.z = std::move(solution.z);

  if (options_.minimize_cost_at_optimum) {
    double bound = point.program_value * (1.0 + 1e-11) + 1e-12;
    absl::StatusOr<LeakageProgram> tighten =
        ReformulateMinCost(table, cost, bound, &reduction_);
    if (tighten.ok()) {
      absl::StatusOr<LeakageSolution> refined =
          SolveLeakageProgram(*tighten, options_.lp);
      if (refined.ok() &&
          cost.Evaluate(refined->z) <= cost.Evaluate(point.z) + 1e-12) {
        point.z = std::move(refined->z);
      }
    }
  }

  point.cost_achieved = cost.Evaluate(point.z);
  WPIR_ASSIGN_OR_RETURN(Leakage leakage, analysis_->OverallLeakage(point.z));
  double ceiling = std::log2(static_cast<double>(table.num_files()));
  point.leakage_bits = std::min(leakage.bits, ceiling);
  point.leakage_normalized = ceiling > 0 ? point.leakage_bits / ceiling : 0.0;
  const Scheme& scheme = analysis_->scheme();
  WPIR_ASSIGN_OR_RETURN(point.rate, WpirRate(scheme.params(),
                                             scheme.dimension(),
                                             point.cost_achieved));
  return point;
}

std::vector<double> TradeoffOptimizer::DefaultGrid(int size) const {
  std::vector<double> grid;
  if (size <= 1) {
    grid.push_back(max_cost_);
    return grid;
  }
  grid.reserve(size);
  for (int i = 0; i < size; ++i) {
    grid.push_back(min_cost_ + (max_cost_ - min_cost_) * i / (size - 1));
  }
  grid.back() = max_cost_;
  return grid;
}

absl::StatusOr<SweepResult> TradeoffOptimizer::Sweep(
    std::span<const double> targets) const {
  SweepResult result;
  for (double target : targets) {
    absl::StatusOr<TradeoffPoint> point = Solve(target);
    if (absl::IsOutOfRange(point.status())) {
      result.infeasible_targets.push_back(target);
      continue;
    }
    if (!point.ok()) return point.status();
    result.by_target.push_back(*std::move(point));
  }
  if (result.by_target.empty()) {
    return absl::InvalidArgumentError(
        "every download cost target in the grid is infeasible");
  }
  result.curve = result.by_target;
  std::sort(result.curve.begin(), result.curve.end(),
            [](const TradeoffPoint& a, const TradeoffPoint& b) {
              if (a.rate != b.rate) return a.rate < b.rate;
              return a.leakage_bits < b.leakage_bits;
            });
  auto same = [](const TradeoffPoint& a, const TradeoffPoint& b) {
    return std::abs(a.rate - b.rate) <= 1e-9 &&
           std::abs(a.leakage_bits - b.leakage_bits) <= 1e-9;
  };
  result.curve.erase(
      std::unique(result.curve.begin(), result.curve.end(), same),
      result.curve.end());
  return result;
}

double BestRateAtLeakage(std::span<const TradeoffPoint> curve,
                         double normalized_leakage, double tol) {
  double best = 0.0;
  for (const TradeoffPoint& p : curve) {
    if (p.leakage_normalized <= normalized_leakage + tol) {
      best = std::max(best, p.rate);
    }
  }
  return best;
}

absl::StatusOr<GridSearchResult> BruteForceMinLeakage(
    const ConditionalQueryTable& table, const LinearForm& cost,
    double cost_target, int divisions, uint64_t max_points) {
  const size_t strategies = table.num_strategies();
  if (divisions < 1 || strategies == 0) {
    return absl::InvalidArgumentError("grid needs divisions >= 1");
  }
  // C(divisions + |S| - 1, |S| - 1) grid points.
  double count = 1.0;
  for (size_t i = 1; i < strategies; ++i) {
    count = count * static_cast<double>(divisions + i) / static_cast<double>(i);
  }
  if (count > static_cast<double>(max_points)) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "simplex grid has %.0f points, above the limit %d", count,
        max_points));
  }

  // Flattened double-precision forms for the inner loop.
  struct Entry {
    size_t strategy;
    double coefficient;
  };
  std::vector<std::vector<std::vector<Entry>>> forms(table.size());
  for (size_t q = 0; q < table.size(); ++q) {
    forms[q].resize(table.num_files());
    for (int m = 1; m <= table.num_files(); ++m) {
      for (const auto& [s, c] : table.conditional(q, m).terms()) {
        forms[q][m - 1].push_back({s, ToDouble(c)});
      }
    }
  }
  std::vector<double> unit_cost(strategies);
  for (size_t s = 0; s < strategies; ++s) {
    unit_cost[s] = ToDouble(cost.Coefficient(s));
  }
  const double budget = cost_target - ToDouble(cost.constant());

  GridSearchResult best;
  best.leakage_bits = std::numeric_limits<double>::infinity();
  std::vector<int> counts(strategies, 0);
  std::vector<double> z(strategies, 0.0);

  auto evaluate = [&]() {
    ++best.points;
    double d = 0.0;
    for (size_t s = 0; s < strategies; ++s) d += unit_cost[s] * z[s];
    if (d > budget + 1e-9) return;
    ++best.feasible_points;
    double sum = 0.0;
    for (const auto& per_file : forms) {
      double top = 0.0;
      for (const auto& form : per_file) {
        double v = 0.0;
        for (const Entry& e : form) v += e.coefficient * z[e.strategy];
        top = std::max(top, v);
      }
      sum += top;
    }
    double bits = std::max(0.0, std::log2(sum));
    if (bits < best.leakage_bits) {
      best.leakage_bits = bits;
      best.z = z;
    }
  };
  // Enumerate compositions of `divisions` into |S| parts.
  auto place = [&](auto&& self, size_t index, int remaining) -> void {
    if (index + 1 == strategies) {
      counts[index] = remaining;
      z[index] = static_cast<double>(remaining) / divisions;
      evaluate();
      return;
    }
    for (int c = remaining; c >= 0; --c) {
      counts[index] = c;
      z[index] = static_cast<double>(c) / divisions;
      self(self, index + 1, remaining - c);
    }
  };
  place(place, 0, divisions);
  if (best.feasible_points == 0) {
    return absl::OutOfRangeError(
        "no grid point satisfies the download cost constraint");
  }
  return best;
}

}  // namespace wpir
