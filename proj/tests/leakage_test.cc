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

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "absl/strings/str_split.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "wpir/schemes.h"

namespace wpir {
namespace {

using ::testing::DoubleNear;
using ::testing::HasSubstr;

QueryMatrix Q(const std::string& text) { return ParseQueryMatrix(text).value(); }

// sum_i coefficient_i * z_{index_i} / denominator, 1-based strategy labels.
LinearForm Z(std::vector<int> labels, int denominator) {
  LinearForm f;
  for (int label : labels) f.AddTerm(label - 1, Rational(1, denominator));
  return f;
}

struct Column {
  std::string query;
  LinearForm given1;
  LinearForm given2;
  LinearForm marginal;
  int length;
};

void ExpectColumn(const ConditionalQueryTable& table, const Column& c) {
  std::optional<size_t> q = table.IndexOf(Q(c.query));
  ASSERT_TRUE(q.has_value()) << c.query;
  EXPECT_EQ(table.conditional(*q, 1), c.given1) << c.query;
  EXPECT_EQ(table.conditional(*q, 2), c.given2) << c.query;
  EXPECT_EQ(table.Marginal(*q), c.marginal) << c.query;
  EXPECT_EQ(table.answer_length(*q), c.length) << c.query;
}

TEST(LinearFormTest, ArithmeticAndPrinting) {
  LinearForm f;
  f.AddTerm(0, Rational(1, 3));
  f.AddTerm(3, Rational(2));
  f.AddTerm(0, Rational(-1, 3));
  EXPECT_EQ(f.terms().size(), 1u);
  EXPECT_EQ(f.Coefficient(3), Rational(2));
  EXPECT_EQ(f.Coefficient(0), Rational(0));
  LinearForm g(Rational(1));
  g.AddTerm(0, Rational(1, 3));
  g += f;
  EXPECT_EQ(g.ToString(), "z1/3 + 2*z4 + 1");
  g *= Rational(3);
  EXPECT_EQ(g.Coefficient(3), Rational(6));
  EXPECT_EQ(g.constant(), Rational(3));
  EXPECT_EQ(g.DenseString(4), "1;0;0;6");
  std::vector<double> z = {0.5, 0, 0, 0.5};
  EXPECT_DOUBLE_EQ(g.Evaluate(z), 3 + 0.5 + 3);
  LinearForm zero;
  EXPECT_TRUE(zero.IsZero());
  zero *= Rational(0);
  EXPECT_TRUE(zero.IsZero());
}

TEST(LinearFormTest, ReducedOnSimplexPreservesValues) {
  LinearForm f(Rational(1, 2));
  f.AddTerm(0, Rational(4));
  f.AddTerm(1, Rational(3));
  f.AddTerm(2, Rational(5, 2));
  LinearForm r = f.ReducedOnSimplex(3);
  EXPECT_EQ(r.ToString(), "3/2*z1 + z2/2 + 3");
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Rational> z(3);
    int64_t total = 0;
    std::vector<int64_t> w(3);
    for (int64_t& v : w) total += v = rng() % 10 + 1;
    for (int i = 0; i < 3; ++i) z[i] = Rational(w[i], total);
    EXPECT_EQ(f.EvaluateExact(z), r.EvaluateExact(z));
  }
}

class ZtslTableTest : public ::testing::TestWithParam<int> {};

TEST_P(ZtslTableTest, MatchesReferenceTable) {
  Scheme scheme = Scheme::Create(SchemeKind::kZtsl, 2, 3, 2).value();
  ConditionalQueryTable t =
      ConditionalQueryTable::Build(scheme, GetParam()).value();
  EXPECT_EQ(t.size(), 9u);
  std::vector<Column> columns = {
      {"0 0/1 1", Z({1}, 3), Z({1}, 3), Z({1}, 3), 1},
      {"1 2/2 0", Z({2}, 3), Z({2}, 3), Z({2}, 3), 1},
      {"2 1/0 2", Z({3}, 3), Z({3}, 3), Z({3}, 3), 1},
      {"1 0/2 1", Z({1}, 3), Z({2}, 3), Z({1, 2}, 6), 1},
      {"2 2/0 0", Z({2}, 3), Z({3}, 3), Z({2, 3}, 6), 1},
      {"0 1/1 2", Z({3}, 3), Z({1}, 3), Z({1, 3}, 6), 1},
      {"2 0/0 1", Z({1}, 3), Z({3}, 3), Z({1, 3}, 6), 2},
      {"0 2/1 0", Z({2}, 3), Z({1}, 3), Z({1, 2}, 6), 2},
      {"1 1/2 2", Z({3}, 3), Z({2}, 3), Z({2, 3}, 6), 0},
  };
  for (const Column& c : columns) ExpectColumn(t, c);
  EXPECT_TRUE(t.CheckNormalization().ok());
}

INSTANTIATE_TEST_SUITE_P(Servers, ZtslTableTest, ::testing::Values(1, 2, 3));

class OlrTableTest : public ::testing::TestWithParam<int> {};

TEST_P(OlrTableTest, MatchesReferenceColumns) {
  Scheme scheme = Scheme::Create(SchemeKind::kOlr, 2, 3, 2).value();
  ConditionalQueryTable t =
      ConditionalQueryTable::Build(scheme, GetParam()).value();
  EXPECT_EQ(t.size(), 18u);
  // Under the uniform prior every marginal is the average of its two
  // conditional entries, so each is a sum over sixths.
  std::vector<Column> columns = {
      {"0 0/2 1", Z({1}, 3), Z({2}, 3), Z({1, 2}, 6), 1},
      {"0 0/1 2", Z({2}, 3), Z({1}, 3), Z({1, 2}, 6), 1},
      {"2 1/0 0", Z({3}, 3), Z({5}, 3), Z({3, 5}, 6), 1},
      {"2 1/1 2", Z({4}, 3), Z({6}, 3), Z({4, 6}, 6), 0},
      {"1 2/0 0", Z({5}, 3), Z({3}, 3), Z({3, 5}, 6), 1},
      {"1 2/2 1", Z({6}, 3), Z({4}, 3), Z({4, 6}, 6), 0},
      {"1 0/0 1", Z({1}, 3), Z({3}, 3), Z({1, 3}, 6), 2},
      {"1 0/2 2", Z({2}, 3), Z({4}, 3), Z({2, 4}, 6), 1},
      {"0 1/1 0", Z({3}, 3), Z({1}, 3), Z({1, 3}, 6), 2},
  };
  for (const Column& c : columns) ExpectColumn(t, c);
  EXPECT_TRUE(t.CheckNormalization().ok());
}

INSTANTIATE_TEST_SUITE_P(Servers, OlrTableTest, ::testing::Values(1, 2, 3));

TEST(CostFormTest, ZtslAndOlrAtTwoThreeTwo) {
  Scheme ztsl = Scheme::Create(SchemeKind::kZtsl, 2, 3, 2).value();
  SchemeAnalysis a = SchemeAnalysis::Build(ztsl).value();
  LinearForm expected_raw;
  expected_raw.AddTerm(0, Rational(4));
  expected_raw.AddTerm(1, Rational(3));
  expected_raw.AddTerm(2, Rational(3));
  EXPECT_EQ(a.cost(), expected_raw);
  LinearForm reduced(Rational(3));
  reduced.AddTerm(0, Rational(1));
  EXPECT_EQ(a.cost().ReducedOnSimplex(3), reduced);

  Scheme olr = Scheme::Create(SchemeKind::kOlr, 2, 3, 2).value();
  SchemeAnalysis b = SchemeAnalysis::Build(olr).value();
  LinearForm olr_reduced(Rational(2));
  for (size_t s : {0, 1, 2, 4}) olr_reduced.AddTerm(s, Rational(2));
  EXPECT_EQ(b.cost().ReducedOnSimplex(6), olr_reduced);
  EXPECT_EQ(b.cost().ReducedOnSimplex(6).ToString(),
            "2*z1 + 2*z2 + 2*z3 + 2*z5 + 2");
}

std::vector<std::tuple<SchemeKind, int, int, int>> SmallInstances() {
  return {{SchemeKind::kZyqt, 2, 3, 2}, {SchemeKind::kZtsl, 2, 3, 2},
          {SchemeKind::kOlr, 2, 3, 2},  {SchemeKind::kZyqt, 3, 3, 2},
          {SchemeKind::kZtsl, 3, 3, 2}, {SchemeKind::kOlr, 3, 3, 2},
          {SchemeKind::kZtsl, 2, 5, 3}, {SchemeKind::kOlr, 2, 5, 3},
          {SchemeKind::kZyqt, 2, 4, 2}, {SchemeKind::kZyqt, 1, 3, 2},
          {SchemeKind::kZtsl, 1, 3, 2}, {SchemeKind::kZyqt, 2, 6, 4}};
}

std::vector<double> RandomPmf(size_t size, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> z(size);
  double total = 0;
  for (double& v : z) total += v = e(rng);
  for (double& v : z) v /= total;
  return z;
}

std::vector<Rational> RandomRationalPmf(size_t size, std::mt19937_64& rng) {
  std::vector<int64_t> w(size);
  int64_t total = 0;
  for (int64_t& v : w) total += v = static_cast<int64_t>(rng() % 7);
  if (total == 0) {
    w[0] = 1;
    total = 1;
  }
  std::vector<Rational> z(size);
  for (size_t i = 0; i < size; ++i) z[i] = Rational(w[i], total);
  return z;
}

TEST(SchemeAnalysisTest, InvariantsAcrossInstances) {
  std::mt19937_64 rng(3);
  for (auto [kind, files, servers, dim] : SmallInstances()) {
    SCOPED_TRACE(::testing::Message() << SchemeName(kind) << " M=" << files
                                      << " N=" << servers << " K=" << dim);
    Scheme scheme = Scheme::Create(kind, files, servers, dim).value();
    SchemeAnalysis a = SchemeAnalysis::Build(scheme).value();
    size_t size = scheme.alphabet().size();
    EXPECT_TRUE(a.ServersIdentical());
    const EffectiveParams& p = scheme.params();

    for (const ConditionalQueryTable& t : a.tables()) {
      EXPECT_TRUE(t.CheckNormalization().ok());
      for (size_t q = 0; q < t.size(); ++q) {
        EXPECT_EQ(t.answer_length(q), AnswerLength(t.query(q), p));
      }
    }
    for (const auto& [index, c] : a.cost().terms()) {
      EXPECT_GE(c, Rational(0));
      EXPECT_LE(c, Rational(servers * p.k));
    }

    // Uniform z hides the requested index.
    std::vector<double> uniform(size, 1.0 / size);
    EXPECT_NEAR(a.OverallLeakage(uniform)->bits, 0.0, 1e-12);

    double log_m = std::log2(files);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> z = RandomPmf(size, rng);
      Leakage l = a.OverallLeakage(z).value();
      EXPECT_GE(l.bits, -1e-12);
      EXPECT_LE(l.bits, log_m + 1e-12);
      if (files == 1) {
        EXPECT_NEAR(l.bits, 0.0, 1e-12);
      }
      EXPECT_GE(a.cost().Evaluate(z), p.lambda * dim - 1e-9);

      // Every server sees the same leakage, exactly.
      std::vector<Rational> zr = RandomRationalPmf(size, rng);
      Rational first = LeakageSumExact(a.table(1), zr);
      for (int j = 2; j <= servers; ++j) {
        EXPECT_EQ(LeakageSumExact(a.table(j), zr), first);
      }
    }
  }
}

TEST(SchemeAnalysisTest, UniformCostGivesCapacityRate) {
  for (SchemeKind kind : {SchemeKind::kZyqt, SchemeKind::kZtsl,
                          SchemeKind::kOlr}) {
    Scheme scheme = Scheme::Create(kind, 2, 3, 2).value();
    SchemeAnalysis a = SchemeAnalysis::Build(scheme).value();
    size_t size = scheme.alphabet().size();
    std::vector<Rational> uniform(size, Rational(1, static_cast<int64_t>(size)));
    EXPECT_EQ(a.cost().EvaluateExact(uniform), Rational(10, 3));
    EXPECT_NEAR(WpirRate(scheme.params(), 2, 10.0 / 3).value(), 0.6, 1e-15);
  }
}

TEST(MaxLeakageTest, ZtslExamples) {
  Scheme scheme = Scheme::Create(SchemeKind::kZtsl, 2, 3, 2).value();
  ConditionalQueryTable t = ConditionalQueryTable::Build(scheme, 1).value();
  std::vector<double> uniform = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  EXPECT_NEAR(MaxLeakage(t, uniform)->bits, 0.0, 1e-15);
  std::vector<double> vertex = {1, 0, 0};
  Leakage l = MaxLeakage(t, vertex).value();
  EXPECT_THAT(l.bits, DoubleNear(std::log2(5.0 / 3.0), 1e-15));
  EXPECT_THAT(l.normalized, DoubleNear(std::log2(5.0 / 3.0), 1e-15));
  std::vector<Rational> exact = {Rational(1), Rational(0), Rational(0)};
  EXPECT_EQ(LeakageSumExact(t, exact), Rational(5, 3));
}

TEST(MaxLeakageTest, SingleFileNeverLeaks) {
  Scheme scheme = Scheme::Create(SchemeKind::kZyqt, 1, 3, 2).value();
  ConditionalQueryTable t = ConditionalQueryTable::Build(scheme, 1).value();
  std::vector<double> z(scheme.alphabet().size(), 0.0);
  z[0] = 1.0;
  Leakage l = MaxLeakage(t, z).value();
  EXPECT_EQ(l.bits, 0.0);
  EXPECT_EQ(l.normalized, 0.0);
}

TEST(SchemeTest, SingleFileOlrHasNoStrategies) {
  // The implied column of an empty tuple is all zeros, never a selector.
  absl::StatusOr<Scheme> s = Scheme::Create(SchemeKind::kOlr, 1, 3, 2);
  ASSERT_FALSE(s.ok());
  EXPECT_EQ(s.status().code(), absl::StatusCode::kFailedPrecondition);
}

TEST(MaxLeakageTest, RejectsInvalidPmf) {
  Scheme scheme = Scheme::Create(SchemeKind::kZtsl, 2, 3, 2).value();
  ConditionalQueryTable t = ConditionalQueryTable::Build(scheme, 1).value();
  std::vector<double> short_z = {1.0};
  EXPECT_FALSE(MaxLeakage(t, short_z).ok());
  std::vector<double> negative = {1.5, -0.5, 0.0};
  EXPECT_FALSE(MaxLeakage(t, negative).ok());
  std::vector<double> unnormalized = {0.5, 0.2, 0.2};
  EXPECT_FALSE(MaxLeakage(t, unnormalized).ok());
  std::vector<double> nan = {NAN, 0.5, 0.5};
  EXPECT_FALSE(ValidatePmf(nan, 3).ok());
}

TEST(WpirRateTest, Examples) {
  EffectiveParams p = EffectiveParams::Compute(3, 2).value();
  EXPECT_DOUBLE_EQ(WpirRate(p, 2, 2.0).value(), 1.0);
  EffectiveParams q = EffectiveParams::Compute(5, 3).value();
  EXPECT_DOUBLE_EQ(WpirRate(q, 3, 6.0).value(), 1.0);
  EXPECT_FALSE(WpirRate(p, 2, 0.0).ok());
  EXPECT_FALSE(WpirRate(p, 2, -1.0).ok());
}

TEST(ConditionalQueryTableTest, CsvShape) {
  Scheme scheme = Scheme::Create(SchemeKind::kZtsl, 2, 3, 2).value();
  ConditionalQueryTable t = ConditionalQueryTable::Build(scheme, 2).value();
  std::string csv = t.ToCsv();
  std::vector<std::string> lines = absl::StrSplit(csv, '\n', absl::SkipEmpty());
  ASSERT_EQ(lines.size(), 1u + 9 * 2);
  EXPECT_EQ(lines[0], "server,query,m,coefficients,length");
  EXPECT_THAT(csv, HasSubstr("2,0 0/1 1,1,1/3;0;0,1\n"));
}

TEST(ConditionalQueryTableTest, WorkLimit) {
  Scheme scheme = Scheme::Create(SchemeKind::kZyqt, 3, 3, 2).value();
  absl::StatusOr<ConditionalQueryTable> t =
      ConditionalQueryTable::Build(scheme, 1, 100);
  ASSERT_FALSE(t.ok());
  EXPECT_EQ(t.status().code(), absl::StatusCode::kResourceExhausted);
}

}  // namespace
}  // namespace wpir
