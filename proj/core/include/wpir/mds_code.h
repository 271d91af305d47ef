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

#ifndef WPIR_MDS_CODE_H_
#define WPIR_MDS_CODE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "wpir/finite_field.h"

namespace wpir {

// An [N, K] linear code given by a K x N generator matrix. Codes built
// through the checked factories have the K-out-of-N property.
class MdsCode {
 public:
  // Systematic Reed-Solomon code: Vandermonde generator on the evaluation
  // points 0, 1, ..., N-1, row-reduced to [I_K | P].
  static absl::StatusOr<MdsCode> ReedSolomon(int length, int dimension,
                                             const PrimeField& field);

  // Wraps an arbitrary generator and rejects it unless CheckMds passes.
  static absl::StatusOr<MdsCode> FromGenerator(FieldMatrix generator);

  // No MDS check. Exists so verification tooling can be fed a broken code.
  static MdsCode FromGeneratorUnchecked(FieldMatrix generator);

  int length() const { return static_cast<int>(generator_.cols()); }
  int dimension() const { return static_cast<int>(generator_.rows()); }
  const PrimeField& field() const { return generator_.field(); }
  const FieldMatrix& generator() const { return generator_; }

  // w * G. Fails if |w| != K.
  absl::StatusOr<std::vector<uint32_t>> Encode(
      std::span<const uint32_t> message) const;

 private:
  explicit MdsCode(FieldMatrix generator) : generator_(std::move(generator)) {}

  FieldMatrix generator_;
};

// True iff every K x K column submatrix of `generator` is invertible.
// Exhaustive over all C(N, K) column subsets.
bool CheckMds(const FieldMatrix& generator);
inline bool CheckMds(const MdsCode& code) { return CheckMds(code.generator()); }

// Recovers the message from K (position, symbol) pairs of a codeword.
absl::StatusOr<std::vector<uint32_t>> ErasureDecode(
    const MdsCode& code, std::span<const size_t> positions,
    std::span<const uint32_t> symbols);

}  // namespace wpir

#endif  // WPIR_MDS_CODE_H_
