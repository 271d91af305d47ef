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

#include "wpir/leakage.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "wpir/status_macros.h"

namespace wpir {

std::string RationalToString(const Rational& r) {
  if (r.denominator() == 1) return absl::StrCat(r.numerator());
  return absl::StrCat(r.numerator(), "/", r.denominator());
}

void LinearForm::AddTerm(size_t index, const Rational& coefficient) {
  if (coefficient == Rational(0)) return;
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), index,
      [](const Term& t, size_t i) { return t.first < i; });
  if (it != terms_.end() && it->first == index) {
    it->second += coefficient;
    if (it->second == Rational(0)) terms_.erase(it);
  } else {
    terms_.insert(it, Term{index, coefficient});
  }
}

Rational LinearForm::Coefficient(size_t index) const {
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), index,
      [](const Term& t, size_t i) { return t.first < i; });
  if (it != terms_.end() && it->first == index) return it->second;
  return Rational(0);
}

LinearForm LinearForm::ReducedOnSimplex(size_t num_strategies) const {
  if (num_strategies == 0) return *this;
  Rational floor = Coefficient(0);
  for (size_t s = 1; s < num_strategies; ++s) {
    floor = std::min(floor, Coefficient(s));
  }
  LinearForm out(constant_ + floor);
  for (size_t s = 0; s < num_strategies; ++s) {
    out.AddTerm(s, Coefficient(s) - floor);
  }
  return out;
}

double LinearForm::Evaluate(std::span<const double> z) const {
  double out = ToDouble(constant_);
  for (const auto& [index, coefficient] : terms_) {
    out += ToDouble(coefficient) * z[index];
  }
  return out;
}

Rational LinearForm::EvaluateExact(std::span<const Rational> z) const {
  Rational out = constant_;
  for (const auto& [index, coefficient] : terms_) {
    out += coefficient * z[index];
  }
  return out;
}

LinearForm& LinearForm::operator+=(const LinearForm& other) {
  for (const auto& [index, coefficient] : other.terms_) {
    AddTerm(index, coefficient);
  }
  constant_ += other.constant_;
  return *this;
}

LinearForm& LinearForm::operator*=(const Rational& factor) {
  if (factor == Rational(0)) {
    terms_.clear();
    constant_ = 0;
    return *this;
  }
  for (auto& term : terms_) term.second *= factor;
  constant_ *= factor;
  return *this;
}

std::string LinearForm::ToString() const {
  std::string out;
  for (const auto& [index, c] : terms_) {
    if (!out.empty()) out += " + ";
    std::string label = absl::StrCat("z", index + 1);
    if (c == Rational(1)) {
      out += label;
    } else if (c.numerator() == 1) {
      absl::StrAppend(&out, label, "/", c.denominator());
    } else {
      absl::StrAppend(&out, RationalToString(c), "*", label);
    }
  }
  if (constant_ != Rational(0) || out.empty()) {
    if (!out.empty()) out += " + ";
    out += RationalToString(constant_);
  }
  return out;
}

std::string LinearForm::DenseString(size_t num_strategies) const {
  std::string out;
  auto it = terms_.begin();
  for (size_t s = 0; s < num_strategies; ++s) {
    if (s > 0) out += ';';
    if (it != terms_.end() && it->first == s) {
      out += RationalToString(it->second);
      ++it;
    } else {
      out += '0';
    }
  }
  return out;
}

absl::StatusOr<ConditionalQueryTable> ConditionalQueryTable::Build(
    const Scheme& scheme, int server, uint64_t work_limit) {
  const int files = scheme.num_files();
  const int servers = scheme.num_servers();
  if (server < 1 || server > servers) {
    return absl::OutOfRangeError(
        absl::StrFormat("server %d outside [1:%d]", server, servers));
  }
  const StrategyAlphabet& alphabet = scheme.alphabet();
  uint64_t work = uint64_t{alphabet.size()} * files * servers;
  if (work > work_limit) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "query table needs |S|*M*N = %d*%d*%d = %d evaluations, above the "
        "limit %d",
        alphabet.size(), files, servers, work, work_limit));
  }
  // Every (s, t) pair contributes z_s * P(T = t) = z_s / N.
  const Rational weight(1, servers);
  std::map<QueryMatrix, std::vector<LinearForm>> accumulated;
  for (int m = 1; m <= files; ++m) {
    for (size_t s = 0; s < alphabet.size(); ++s) {
      for (int t = 1; t <= servers; ++t) {
        WPIR_ASSIGN_OR_RETURN(
            QueryMatrix q, scheme.TimeSharedQuery(m, alphabet[s], t, server));
        auto [it, inserted] = accumulated.try_emplace(std::move(q));
        if (inserted) it->second.resize(files);
        it->second[m - 1].AddTerm(s, weight);
      }
    }
  }
  ConditionalQueryTable table;
  table.server_ = server;
  table.num_files_ = files;
  table.num_strategies_ = alphabet.size();
  table.queries_.reserve(accumulated.size());
  table.forms_.reserve(accumulated.size() * files);
  table.lengths_.reserve(accumulated.size());
  for (auto& [q, forms] : accumulated) {
    table.lengths_.push_back(AnswerLength(q, scheme.params()));
    table.queries_.push_back(q);
    for (LinearForm& f : forms) table.forms_.push_back(std::move(f));
  }
  return table;
}

LinearForm ConditionalQueryTable::Marginal(size_t q) const {
  LinearForm out;
  for (int m = 1; m <= num_files_; ++m) out += conditional(q, m);
  out *= Rational(1, num_files_);
  return out;
}

std::optional<size_t> ConditionalQueryTable::IndexOf(
    const QueryMatrix& query) const {
  auto it = std::lower_bound(queries_.begin(), queries_.end(), query);
  if (it == queries_.end() || *it != query) return std::nullopt;
  return static_cast<size_t>(it - queries_.begin());
}

absl::Status ConditionalQueryTable::CheckNormalization() const {
  for (int m = 1; m <= num_files_; ++m) {
    std::vector<Rational> total(num_strategies_, Rational(0));
    for (size_t q = 0; q < size(); ++q) {
      const LinearForm& form = conditional(q, m);
      if (form.constant() != Rational(0)) {
        return absl::InternalError("conditional form has a constant term");
      }
      for (const auto& [s, c] : form.terms()) {
        if (c < Rational(0)) {
          return absl::InternalError(absl::StrFormat(
              "negative coefficient for z%d in query %s", s + 1,
              query(q).ToString()));
        }
        total[s] += c;
      }
    }
    for (size_t s = 0; s < num_strategies_; ++s) {
      if (total[s] != Rational(1)) {
        return absl::InternalError(absl::StrFormat(
            "P(.|m=%d) puts mass %s on strategy z%d instead of 1", m,
            RationalToString(total[s]), s + 1));
      }
    }
  }
  return absl::OkStatus();
}

bool ConditionalQueryTable::SameDistribution(
    const ConditionalQueryTable& other) const {
  return num_files_ == other.num_files_ &&
         num_strategies_ == other.num_strategies_ &&
         queries_ == other.queries_ && forms_ == other.forms_ &&
         lengths_ == other.lengths_;
}

std::string ConditionalQueryTable::ToCsv() const {
  std::string out = "server,query,m,coefficients,length\n";
  for (size_t q = 0; q < size(); ++q) {
    for (int m = 1; m <= num_files_; ++m) {
      absl::StrAppend(&out, server_, ",", queries_[q].ToString(), ",", m, ",",
                      conditional(q, m).DenseString(num_strategies_), ",",
                      lengths_[q], "\n");
    }
  }
  return out;
}

absl::Status ValidatePmf(std::span<const double> z, size_t num_strategies,
                         double tol) {
  if (z.size() != num_strategies) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "PMF has %d entries for %d strategies", z.size(), num_strategies));
  }
  double total = 0.0;
  for (double v : z) {
    if (!std::isfinite(v) || v < -tol) {
      return absl::InvalidArgumentError(
          absl::StrFormat("PMF entry %g is negative or not finite", v));
    }
    total += v;
  }
  if (std::abs(total - 1.0) > tol) {
    return absl::InvalidArgumentError(
        absl::StrFormat("PMF sums to %.12g, not 1", total));
  }
  return absl::OkStatus();
}

double LeakageSum(const ConditionalQueryTable& table,
                  std::span<const double> z) {
  double sum = 0.0;
  for (size_t q = 0; q < table.size(); ++q) {
    double best = 0.0;
    for (int m = 1; m <= table.num_files(); ++m) {
      best = std::max(best, table.conditional(q, m).Evaluate(z));
    }
    sum += best;
  }
  return sum;
}

Rational LeakageSumExact(const ConditionalQueryTable& table,
                         std::span<const Rational> z) {
  Rational sum(0);
  for (size_t q = 0; q < table.size(); ++q) {
    Rational best(0);
    for (int m = 1; m <= table.num_files(); ++m) {
      best = std::max(best, table.conditional(q, m).EvaluateExact(z));
    }
    sum += best;
  }
  return sum;
}

absl::StatusOr<Leakage> MaxLeakage(const ConditionalQueryTable& table,
                                   std::span<const double> z) {
  WPIR_RETURN_IF_ERROR(ValidatePmf(z, table.num_strategies()));
  Leakage out;
  // The sum is at least 1 for any PMF; clamp rounding noise below it.
  out.bits = std::max(0.0, std::log2(LeakageSum(table, z)));
  if (table.num_files() > 1) {
    out.normalized = out.bits / std::log2(table.num_files());
  }
  return out;
}

LinearForm DownloadCostForm(std::span<const ConditionalQueryTable> tables) {
  LinearForm cost;
  for (const ConditionalQueryTable& table : tables) {
    for (size_t q = 0; q < table.size(); ++q) {
      int length = table.answer_length(q);
      if (length == 0) continue;
      LinearForm marginal = table.Marginal(q);
      marginal *= Rational(length);
      cost += marginal;
    }
  }
  return cost;
}

absl::StatusOr<double> WpirRate(const EffectiveParams& params, int dimension,
                                double cost) {
  if (!(cost > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("download cost must be positive, got %g", cost));
  }
  return static_cast<double>(params.lambda) * dimension / cost;
}

absl::StatusOr<SchemeAnalysis> SchemeAnalysis::Build(const Scheme& scheme,
                                                     uint64_t work_limit) {
  std::vector<ConditionalQueryTable> tables;
  tables.reserve(scheme.num_servers());
  for (int j = 1; j <= scheme.num_servers(); ++j) {
    WPIR_ASSIGN_OR_RETURN(ConditionalQueryTable table,
                          ConditionalQueryTable::Build(scheme, j, work_limit));
    tables.push_back(std::move(table));
  }
  LinearForm cost = DownloadCostForm(tables);
  return SchemeAnalysis(&scheme, std::move(tables), std::move(cost));
}

absl::StatusOr<Leakage> SchemeAnalysis::OverallLeakage(
    std::span<const double> z) const {
  Leakage worst;
  for (const ConditionalQueryTable& table : tables_) {
    WPIR_ASSIGN_OR_RETURN(Leakage l, MaxLeakage(table, z));
    if (l.bits > worst.bits) worst = l;
  }
  return worst;
}

std::vector<double> SchemeAnalysis::PerServerLeakageBits(
    std::span<const double> z) const {
  std::vector<double> out;
  out.reserve(tables_.size());
  for (const ConditionalQueryTable& table : tables_) {
    out.push_back(std::log2(LeakageSum(table, z)));
  }
  return out;
}

bool SchemeAnalysis::ServersIdentical() const {
  for (size_t j = 1; j < tables_.size(); ++j) {
    if (!tables_[j].SameDistribution(tables_[0])) return false;
  }
  return true;
}

}  // namespace wpir
