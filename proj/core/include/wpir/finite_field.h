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

// Prime-field arithmetic and dense linear algebra over F_q.
//
// Elements are stored as reduced residues in [0, q). A PrimeField is a small
// value type identified by its modulus; two fields compare equal iff their
// moduli do. Matrices keep raw residues and carry their field.

#ifndef WPIR_FINITE_FIELD_H_
#define WPIR_FINITE_FIELD_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace wpir {

bool IsPrime(uint64_t value);

// Smallest prime p with p >= value (and p >= 2).
uint32_t SmallestPrimeAtLeast(uint32_t value);

class FieldElement;

class PrimeField {
 public:
  // Largest supported modulus. Products of two residues fit in 64 bits.
  static constexpr uint32_t kMaxModulus = (1u << 31) - 1;

  static absl::StatusOr<PrimeField> Create(uint32_t modulus);

  uint32_t modulus() const { return modulus_; }

  uint32_t Reduce(int64_t value) const;
  uint32_t Add(uint32_t a, uint32_t b) const {
    uint64_t s = uint64_t{a} + b;
    return static_cast<uint32_t>(s >= modulus_ ? s - modulus_ : s);
  }
  uint32_t Sub(uint32_t a, uint32_t b) const {
    return a >= b ? a - b : a + modulus_ - b;
  }
  uint32_t Neg(uint32_t a) const { return a == 0 ? 0 : modulus_ - a; }
  uint32_t Mul(uint32_t a, uint32_t b) const {
    return static_cast<uint32_t>(uint64_t{a} * b % modulus_);
  }
  uint32_t Pow(uint32_t base, uint64_t exponent) const;
  // Multiplicative inverse; `a` must be nonzero.
  uint32_t InverseUnchecked(uint32_t a) const;
  absl::StatusOr<uint32_t> Inverse(uint32_t a) const;

  FieldElement Element(int64_t value) const;
  FieldElement Zero() const;
  FieldElement One() const;

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  explicit PrimeField(uint32_t modulus) : modulus_(modulus) {}

  uint32_t modulus_;
};

// A residue tagged with its modulus. The arithmetic operators require both
// operands from the same field (asserted in debug builds); use ApplyFieldOp
// for the checked form.
class FieldElement {
 public:
  FieldElement(uint32_t value, const PrimeField& field)
      : value_(field.Reduce(value)), modulus_(field.modulus()) {}

  uint32_t value() const { return value_; }
  uint32_t modulus() const { return modulus_; }
  bool is_zero() const { return value_ == 0; }

  FieldElement operator+(const FieldElement& other) const;
  FieldElement operator-(const FieldElement& other) const;
  FieldElement operator*(const FieldElement& other) const;
  FieldElement operator-() const;

  friend bool operator==(const FieldElement&, const FieldElement&) = default;
  friend std::ostream& operator<<(std::ostream& os, const FieldElement& e) {
    return os << e.value_;
  }

 private:
  friend class PrimeField;
  FieldElement(uint32_t reduced, uint32_t modulus)
      : value_(reduced), modulus_(modulus) {}

  uint32_t value_;
  uint32_t modulus_;
};

enum class FieldOp { kAdd, kSub, kMul, kDiv };

// Checked binary operation. Fails with InvalidArgument on a field mismatch
// and on division by zero.
absl::StatusOr<FieldElement> ApplyFieldOp(const FieldElement& a,
                                          const FieldElement& b, FieldOp op);

class FieldMatrix {
 public:
  FieldMatrix(const PrimeField& field, size_t rows, size_t cols)
      : field_(field), rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

  // Row-major residues; values are reduced into the field.
  static absl::StatusOr<FieldMatrix> FromRows(
      const PrimeField& field, const std::vector<std::vector<int64_t>>& rows);
  static FieldMatrix Identity(const PrimeField& field, size_t size);

  const PrimeField& field() const { return field_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  uint32_t at(size_t r, size_t c) const { return entries_[r * cols_ + c]; }
  void set(size_t r, size_t c, uint32_t value) {
    entries_[r * cols_ + c] = field_.Reduce(value);
  }
  FieldElement element(size_t r, size_t c) const {
    return FieldElement(at(r, c), field_);
  }
  std::span<const uint32_t> row(size_t r) const {
    return {entries_.data() + r * cols_, cols_};
  }

  absl::StatusOr<FieldMatrix> Multiply(const FieldMatrix& other) const;
  // Row vector times matrix.
  absl::StatusOr<std::vector<uint32_t>> LeftMultiply(
      std::span<const uint32_t> vector) const;
  FieldMatrix SelectColumns(std::span<const size_t> columns) const;
  size_t Rank() const;
  absl::StatusOr<FieldMatrix> Inverse() const;

  friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;
  std::string DebugString() const;

 private:
  PrimeField field_;
  size_t rows_;
  size_t cols_;
  std::vector<uint32_t> entries_;
};

// Outcome of Gauss-Jordan elimination on A x = b.
struct LinearSolution {
  bool feasible = false;
  size_t rank = 0;
  // Column index of each pivot, in row order of the reduced echelon form.
  std::vector<size_t> pivot_columns;
  std::vector<size_t> free_columns;
  // values[i] is set iff unknown i is the same in every solution.
  std::vector<std::optional<uint32_t>> values;
  // One solution (free unknowns set to zero); empty when infeasible.
  std::vector<uint32_t> particular;

  bool IsDetermined(size_t unknown) const {
    return unknown < values.size() && values[unknown].has_value();
  }
};

// Solves A x = b over the field of A. An inconsistent system is reported as
// feasible == false rather than as an error; a shape mismatch is an error.
absl::StatusOr<LinearSolution> SolveLinear(const FieldMatrix& a,
                                           std::span<const uint32_t> b);

}  // namespace wpir

#endif  // WPIR_FINITE_FIELD_H_
