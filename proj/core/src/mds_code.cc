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

#include "wpir/mds_code.h"

#include <numeric>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "wpir/status_macros.h"

namespace wpir {

absl::StatusOr<MdsCode> MdsCode::ReedSolomon(int length, int dimension,
                                             const PrimeField& field) {
  if (dimension < 1 || length <= dimension) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "need N > K >= 1, got N=%d K=%d", length, dimension));
  }
  if (field.modulus() < static_cast<uint32_t>(length)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "GF(%u) has fewer than N=%d evaluation points", field.modulus(),
        length));
  }
  size_t n = static_cast<size_t>(length);
  size_t k = static_cast<size_t>(dimension);
  FieldMatrix vandermonde(field, k, n);
  for (size_t j = 0; j < n; ++j) {
    for (size_t i = 0; i < k; ++i) {
      // 0^0 = 1, so the point 0 contributes the column e_0.
      vandermonde.set(i, j, field.Pow(static_cast<uint32_t>(j), i));
    }
  }
  std::vector<size_t> head(k);
  std::iota(head.begin(), head.end(), size_t{0});
  WPIR_ASSIGN_OR_RETURN(FieldMatrix head_inverse,
                        vandermonde.SelectColumns(head).Inverse());
  WPIR_ASSIGN_OR_RETURN(FieldMatrix systematic,
                        head_inverse.Multiply(vandermonde));
  return FromGenerator(std::move(systematic));
}

absl::StatusOr<MdsCode> MdsCode::FromGenerator(FieldMatrix generator) {
  if (generator.rows() < 1 || generator.cols() <= generator.rows()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "generator must be K x N with N > K >= 1, got %dx%d",
        generator.rows(), generator.cols()));
  }
  if (!CheckMds(generator)) {
    return absl::FailedPreconditionError(
        "generator violates the MDS property: some K x K submatrix is "
        "singular");
  }
  return MdsCode(std::move(generator));
}

MdsCode MdsCode::FromGeneratorUnchecked(FieldMatrix generator) {
  return MdsCode(std::move(generator));
}

absl::StatusOr<std::vector<uint32_t>> MdsCode::Encode(
    std::span<const uint32_t> message) const {
  if (message.size() != generator_.rows()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("message length %d != K=%d", message.size(),
                        generator_.rows()));
  }
  return generator_.LeftMultiply(message);
}

bool CheckMds(const FieldMatrix& generator) {
  size_t k = generator.rows();
  size_t n = generator.cols();
  if (k == 0 || k > n) return false;
  std::vector<size_t> subset(k);
  std::iota(subset.begin(), subset.end(), size_t{0});
  while (true) {
    if (generator.SelectColumns(subset).Rank() != k) return false;
    // Next k-subset of [0, n) in lexicographic order.
    size_t i = k;
    while (i > 0 && subset[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return true;
    ++subset[i - 1];
    for (size_t j = i; j < k; ++j) subset[j] = subset[j - 1] + 1;
  }
}

absl::StatusOr<std::vector<uint32_t>> ErasureDecode(
    const MdsCode& code, std::span<const size_t> positions,
    std::span<const uint32_t> symbols) {
  size_t k = static_cast<size_t>(code.dimension());
  if (positions.size() != k || symbols.size() != k) {
    return absl::InvalidArgumentError(
        absl::StrFormat("erasure decoding needs exactly K=%d symbols", k));
  }
  for (size_t p : positions) {
    if (p >= static_cast<size_t>(code.length())) {
      return absl::OutOfRangeError(absl::StrFormat("position %d >= N", p));
    }
  }
  // Solve w * G_S = y, i.e. G_S^T w^T = y^T.
  FieldMatrix sub = code.generator().SelectColumns(positions);
  FieldMatrix transposed(code.field(), k, k);
  for (size_t r = 0; r < k; ++r) {
    for (size_t c = 0; c < k; ++c) transposed.set(r, c, sub.at(c, r));
  }
  WPIR_ASSIGN_OR_RETURN(LinearSolution solution,
                        SolveLinear(transposed, symbols));
  if (!solution.feasible || solution.rank != k) {
    return absl::FailedPreconditionError(
        "selected positions do not determine the message");
  }
  return solution.particular;
}

}  // namespace wpir
