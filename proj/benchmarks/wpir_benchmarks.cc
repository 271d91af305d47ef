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


#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "benchmark/benchmark.h"
#include "wpir/finite_field.h"
#include "wpir/leakage.h"
#include "wpir/optimizer.h"
#include "wpir/schemes.h"
#include "wpir/simulator.h"

namespace wpir {
namespace {

void BM_FieldMulAdd(benchmark::State& state) {
  PrimeField field = PrimeField::Create(65521).value();
  std::mt19937_64 rng(1);
  std::vector<uint32_t> a(1024), b(1024);
  for (size_t i = 0; i < a.size(); ++i) {
    a[i] = field.Reduce(static_cast<int64_t>(rng()));
    b[i] = field.Reduce(static_cast<int64_t>(rng()));
  }
  for (auto _ : state) {
    uint32_t acc = 0;
    for (size_t i = 0; i < a.size(); ++i) {
      acc = field.Add(acc, field.Mul(a[i], b[i]));
    }
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * a.size());
}
BENCHMARK(BM_FieldMulAdd);

void BM_FieldInverse(benchmark::State& state) {
  PrimeField field = PrimeField::Create(65521).value();
  uint32_t x = 1;
  for (auto _ : state) {
    x = x % 65520 + 1;
    benchmark::DoNotOptimize(field.InverseUnchecked(x));
  }
}
BENCHMARK(BM_FieldInverse);

void BM_TableBuild(benchmark::State& state) {
  SchemeKind kind = static_cast<SchemeKind>(state.range(0));
  Scheme scheme = Scheme::Create(kind, static_cast<int>(state.range(1)), 3, 2)
                      .value();
  for (auto _ : state) {
    benchmark::DoNotOptimize(SchemeAnalysis::Build(scheme).value());
  }
  state.SetLabel(std::string(SchemeName(kind)));
}
BENCHMARK(BM_TableBuild)
    ->Args({static_cast<int>(SchemeKind::kZyqt), 3})
    ->Args({static_cast<int>(SchemeKind::kZtsl), 3})
    ->Args({static_cast<int>(SchemeKind::kOlr), 3});

void BM_LpSolve(benchmark::State& state) {
  SchemeKind kind = static_cast<SchemeKind>(state.range(0));
  Scheme scheme = Scheme::Create(kind, 3, 3, 2).value();
  SchemeAnalysis analysis = SchemeAnalysis::Build(scheme).value();
  TradeoffOptimizer::Options options;
  options.use_symmetry = state.range(1) != 0;
  TradeoffOptimizer optimizer =
      TradeoffOptimizer::Create(analysis, options).value();
  double target = 0.5 * (optimizer.min_cost() + optimizer.max_cost());
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimizer.Solve(target).value());
  }
  state.SetLabel(std::string(SchemeName(kind)) +
                 (options.use_symmetry ? " orbits" : " full"));
}
BENCHMARK(BM_LpSolve)
    ->Args({static_cast<int>(SchemeKind::kZyqt), 1})
    ->Args({static_cast<int>(SchemeKind::kZyqt), 0})
    ->Args({static_cast<int>(SchemeKind::kOlr), 1})
    ->Args({static_cast<int>(SchemeKind::kOlr), 0})
    ->Unit(benchmark::kMillisecond);

void BM_Retrieval(benchmark::State& state) {
  Scheme scheme = Scheme::Create(SchemeKind::kOlr, 3, 5, 3).value();
  Deployment deployment =
      Deployment::CreateRandom(scheme, 65521, 7).value();
  size_t strategies = scheme.alphabet().size();
  size_t s = 0;
  for (auto _ : state) {
    s = (s + 1) % strategies;
    benchmark::DoNotOptimize(
        RunRetrieval(deployment, 1 + static_cast<int>(s % 3), s,
                     1 + static_cast<int>(s % 5))
            .value());
  }
}
BENCHMARK(BM_Retrieval);

}  // namespace
}  // namespace wpir

BENCHMARK_MAIN();
