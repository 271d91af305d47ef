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

#include "wpir/symmetry.h"

#include <numeric>
#include <optional>

namespace wpir {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(size_t size) : parent_(size) {
    std::iota(parent_.begin(), parent_.end(), size_t{0});
  }
  size_t Find(size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void Union(size_t a, size_t b) {
    a = Find(a);
    b = Find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

  // Dense orbit ids in order of first appearance, plus orbit sizes.
  void Label(std::vector<size_t>& ids, std::vector<size_t>& sizes) {
    std::vector<size_t> root_id(parent_.size(), SIZE_MAX);
    ids.assign(parent_.size(), 0);
    sizes.clear();
    for (size_t x = 0; x < parent_.size(); ++x) {
      size_t root = Find(x);
      if (root_id[root] == SIZE_MAX) {
        root_id[root] = sizes.size();
        sizes.push_back(0);
      }
      ids[x] = root_id[root];
      ++sizes[ids[x]];
    }
  }

 private:
  std::vector<size_t> parent_;
};

LinearForm Relabel(const LinearForm& form, std::span<const size_t> perm) {
  LinearForm out(form.constant());
  for (const auto& [s, c] : form.terms()) out.AddTerm(perm[s], c);
  return out;
}

}  // namespace

OrbitReduction TrivialReduction(const ConditionalQueryTable& table) {
  OrbitReduction out;
  out.strategy_orbit.resize(table.num_strategies());
  std::iota(out.strategy_orbit.begin(), out.strategy_orbit.end(), size_t{0});
  out.strategy_orbit_size.assign(table.num_strategies(), 1);
  out.query_orbit.resize(table.size());
  std::iota(out.query_orbit.begin(), out.query_orbit.end(), size_t{0});
  out.query_orbit_size.assign(table.size(), 1);
  out.query_representative = out.query_orbit;
  return out;
}

bool IsTableSymmetry(const ConditionalQueryTable& table, const LinearForm& cost,
                     const Relabeling& g) {
  if (g.strategy_perm.size() != table.num_strategies() ||
      g.file_perm.size() != static_cast<size_t>(table.num_files())) {
    return false;
  }
  if (!table.queries().empty() &&
      g.row_perm.size() != static_cast<size_t>(table.query(0).rows())) {
    return false;
  }
  for (const auto& [s, c] : cost.terms()) {
    if (cost.Coefficient(g.strategy_perm[s]) != c) return false;
  }
  for (size_t q = 0; q < table.size(); ++q) {
    std::optional<size_t> image =
        table.IndexOf(ApplyRelabeling(g, table.query(q)));
    if (!image.has_value()) return false;
    if (table.answer_length(*image) != table.answer_length(q)) return false;
    for (int m = 1; m <= table.num_files(); ++m) {
      const LinearForm& mapped = table.conditional(*image, g.file_perm[m - 1] + 1);
      if (mapped != Relabel(table.conditional(q, m), g.strategy_perm)) {
        return false;
      }
    }
  }
  return true;
}

OrbitReduction ReduceBySymmetry(const ConditionalQueryTable& table,
                                const LinearForm& cost,
                                std::span<const Relabeling> candidates) {
  DisjointSets strategies(table.num_strategies());
  DisjointSets queries(table.size());
  size_t used = 0;
  for (const Relabeling& g : candidates) {
    if (!IsTableSymmetry(table, cost, g)) continue;
    ++used;
    for (size_t s = 0; s < table.num_strategies(); ++s) {
      strategies.Union(s, g.strategy_perm[s]);
    }
    for (size_t q = 0; q < table.size(); ++q) {
      queries.Union(q, *table.IndexOf(ApplyRelabeling(g, table.query(q))));
    }
  }
  OrbitReduction out;
  out.generators = used;
  strategies.Label(out.strategy_orbit, out.strategy_orbit_size);
  queries.Label(out.query_orbit, out.query_orbit_size);
  out.query_representative.assign(out.query_orbit_size.size(), SIZE_MAX);
  for (size_t q = 0; q < table.size(); ++q) {
    size_t& rep = out.query_representative[out.query_orbit[q]];
    if (rep == SIZE_MAX) rep = q;
  }
  return out;
}

}  // namespace wpir
