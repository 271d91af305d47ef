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

// Exact conditional query distributions P(Q_j = q | M = m) as linear forms in
// the strategy PMF z, and the quantities derived from them: maximal leakage,
// download cost and rate.

#ifndef WPIR_LEAKAGE_H_
#define WPIR_LEAKAGE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "absl/status/statusor.h"
#include "wpir/schemes.h"

namespace wpir {

using Rational = boost::rational<int64_t>;

std::string RationalToString(const Rational& r);
inline double ToDouble(const Rational& r) {
  return static_cast<double>(r.numerator()) /
         static_cast<double>(r.denominator());
}

// constant + sum_s coefficient_s * z_s with exact coefficients. Terms are
// kept sorted by strategy index and never hold a zero coefficient.
class LinearForm {
 public:
  using Term = std::pair<size_t, Rational>;

  LinearForm() = default;
  explicit LinearForm(Rational constant) : constant_(constant) {}

  void AddTerm(size_t index, const Rational& coefficient);
  const std::vector<Term>& terms() const { return terms_; }
  const Rational& constant() const { return constant_; }
  Rational Coefficient(size_t index) const;
  bool IsZero() const { return terms_.empty() && constant_ == Rational(0); }

  double Evaluate(std::span<const double> z) const;
  Rational EvaluateExact(std::span<const Rational> z) const;

  // The same function restricted to sum_s z_s = 1, rewritten so that the
  // smallest of the `num_strategies` coefficients is zero.
  LinearForm ReducedOnSimplex(size_t num_strategies) const;

  LinearForm& operator+=(const LinearForm& other);
  LinearForm& operator*=(const Rational& factor);

  // Strategy labels are printed 1-based: "z1/3 + 2*z4 + 1".
  std::string ToString() const;
  // Dense coefficient vector over `num_strategies`, ';'-separated.
  std::string DenseString(size_t num_strategies) const;

  friend bool operator==(const LinearForm&, const LinearForm&) = default;

 private:
  std::vector<Term> terms_;
  Rational constant_{0};
};

// The conditional query PMF seen by one server of the time-shared scheme,
// over the queries reachable when z has full support.
class ConditionalQueryTable {
 public:
  // Guard on |S| * M * N query evaluations.
  static constexpr uint64_t kDefaultWorkLimit = 50'000'000;

  static absl::StatusOr<ConditionalQueryTable> Build(
      const Scheme& scheme, int server,
      uint64_t work_limit = kDefaultWorkLimit);

  int server() const { return server_; }
  int num_files() const { return num_files_; }
  size_t num_strategies() const { return num_strategies_; }
  size_t size() const { return queries_.size(); }

  const QueryMatrix& query(size_t q) const { return queries_[q]; }
  const std::vector<QueryMatrix>& queries() const { return queries_; }
  // P(q | m), m in [1:M].
  const LinearForm& conditional(size_t q, int m) const {
    return forms_[q * num_files_ + (m - 1)];
  }
  // P(q) under the uniform prior on the requested file.
  LinearForm Marginal(size_t q) const;
  int answer_length(size_t q) const { return lengths_[q]; }
  std::optional<size_t> IndexOf(const QueryMatrix& query) const;

  // Per file, the coefficients of every strategy sum to one over all
  // queries. Exact check.
  absl::Status CheckNormalization() const;

  // Same queries, forms and lengths (the server index may differ).
  bool SameDistribution(const ConditionalQueryTable& other) const;

  // server,query,m,coefficients,length
  std::string ToCsv() const;

 private:
  ConditionalQueryTable() = default;

  int server_ = 0;
  int num_files_ = 0;
  size_t num_strategies_ = 0;
  std::vector<QueryMatrix> queries_;  // sorted
  std::vector<LinearForm> forms_;     // queries_.size() x M
  std::vector<int> lengths_;
};

struct Leakage {
  double bits = 0.0;
  // bits / log2(M); zero when M = 1.
  double normalized = 0.0;
};

// Fails unless z has |S| nonnegative entries summing to one (within `tol`).
absl::Status ValidatePmf(std::span<const double> z, size_t num_strategies,
                         double tol = 1e-9);

// sum_q max_m P(q | m) at z.
double LeakageSum(const ConditionalQueryTable& table,
                  std::span<const double> z);
Rational LeakageSumExact(const ConditionalQueryTable& table,
                         std::span<const Rational> z);

// log2 sum_q max_m P(q | m).
absl::StatusOr<Leakage> MaxLeakage(const ConditionalQueryTable& table,
                                   std::span<const double> z);

// D(z) = sum_j sum_q l_j(q) * (1/M) sum_m P_j(q | m).
LinearForm DownloadCostForm(std::span<const ConditionalQueryTable> tables);

// lambda * K / D.
absl::StatusOr<double> WpirRate(const EffectiveParams& params, int dimension,
                                double cost);

// Query tables for every server of a scheme plus its download cost form.
class SchemeAnalysis {
 public:
  static absl::StatusOr<SchemeAnalysis> Build(
      const Scheme& scheme,
      uint64_t work_limit = ConditionalQueryTable::kDefaultWorkLimit);

  const Scheme& scheme() const { return *scheme_; }
  // j in [1:N].
  const ConditionalQueryTable& table(int j) const { return tables_[j - 1]; }
  const std::vector<ConditionalQueryTable>& tables() const { return tables_; }
  const LinearForm& cost() const { return cost_; }

  // max_j of the per-server leakage.
  absl::StatusOr<Leakage> OverallLeakage(std::span<const double> z) const;
  std::vector<double> PerServerLeakageBits(std::span<const double> z) const;
  // True iff every server observes the same conditional distribution.
  bool ServersIdentical() const;

 private:
  SchemeAnalysis(const Scheme* scheme,
                 std::vector<ConditionalQueryTable> tables, LinearForm cost)
      : scheme_(scheme), tables_(std::move(tables)), cost_(std::move(cost)) {}

  const Scheme* scheme_;
  std::vector<ConditionalQueryTable> tables_;
  LinearForm cost_;
};

}  // namespace wpir

#endif  // WPIR_LEAKAGE_H_
