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

// Orbit reduction of the leakage program.
//
// If a relabeling g of rows and files maps every (query, file) entry of the
// conditional table onto another entry with the strategies permuted, and
// preserves answer lengths, then both the leakage objective and the cost are
// invariant under the induced permutation of z. The program is convex, so
// averaging any optimum over the group gives an optimum that is constant on
// strategy orbits and on query orbits. Solving over orbit values loses
// nothing and can shrink the program by |group|.

#ifndef WPIR_SYMMETRY_H_
#define WPIR_SYMMETRY_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "wpir/leakage.h"
#include "wpir/schemes.h"

namespace wpir {

struct OrbitReduction {
  std::vector<size_t> strategy_orbit;       // orbit id of each strategy
  std::vector<size_t> strategy_orbit_size;  // indexed by orbit id
  std::vector<size_t> query_orbit;          // orbit id of each table query
  std::vector<size_t> query_orbit_size;
  std::vector<size_t> query_representative;  // a table query per orbit
  size_t generators = 0;

  size_t num_strategy_orbits() const { return strategy_orbit_size.size(); }
  size_t num_query_orbits() const { return query_orbit_size.size(); }
};

// Every strategy and every query in its own orbit.
OrbitReduction TrivialReduction(const ConditionalQueryTable& table);

// True iff `g` maps `table` and `cost` onto themselves exactly.
bool IsTableSymmetry(const ConditionalQueryTable& table, const LinearForm& cost,
                     const Relabeling& g);

// Orbits of the group generated by those candidates that pass
// IsTableSymmetry. Candidates that fail are skipped.
OrbitReduction ReduceBySymmetry(const ConditionalQueryTable& table,
                                const LinearForm& cost,
                                std::span<const Relabeling> candidates);

}  // namespace wpir

#endif  // WPIR_SYMMETRY_H_
