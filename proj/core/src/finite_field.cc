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

#include "wpir/finite_field.h"

#include <cassert>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"

namespace wpir {

bool IsPrime(uint64_t value) {
  if (value < 2) return false;
  if (value % 2 == 0) return value == 2;
  for (uint64_t d = 3; d * d <= value; d += 2) {
    if (value % d == 0) return false;
  }
  return true;
}

uint32_t SmallestPrimeAtLeast(uint32_t value) {
  uint32_t candidate = value < 2 ? 2 : value;
  while (!IsPrime(candidate)) ++candidate;
  return candidate;
}

absl::StatusOr<PrimeField> PrimeField::Create(uint32_t modulus) {
  if (modulus > kMaxModulus) {
    return absl::InvalidArgumentError(
        absl::StrFormat("field modulus %u exceeds %u", modulus, kMaxModulus));
  }
  if (!IsPrime(modulus)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("field modulus %u is not prime", modulus));
  }
  return PrimeField(modulus);
}

uint32_t PrimeField::Reduce(int64_t value) const {
  int64_t r = value % static_cast<int64_t>(modulus_);
  if (r < 0) r += modulus_;
  return static_cast<uint32_t>(r);
}

uint32_t PrimeField::Pow(uint32_t base, uint64_t exponent) const {
  uint32_t result = 1 % modulus_;
  uint32_t b = base % modulus_;
  while (exponent > 0) {
    if (exponent & 1) result = Mul(result, b);
    b = Mul(b, b);
    exponent >>= 1;
  }
  return result;
}

uint32_t PrimeField::InverseUnchecked(uint32_t a) const {
  assert(a % modulus_ != 0);
  // Fermat: a^(q-2) = a^-1.
  return Pow(a, modulus_ - 2);
}

absl::StatusOr<uint32_t> PrimeField::Inverse(uint32_t a) const {
  if (a % modulus_ == 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("division by zero in GF(%u)", modulus_));
  }
  return InverseUnchecked(a % modulus_);
}

FieldElement PrimeField::Element(int64_t value) const {
  return FieldElement(Reduce(value), modulus_);
}
FieldElement PrimeField::Zero() const { return FieldElement(0u, modulus_); }
FieldElement PrimeField::One() const { return FieldElement(1u, modulus_); }

namespace {

PrimeField FieldOf(const FieldElement& e) {
  // Every FieldElement was built from a valid PrimeField.
  return *PrimeField::Create(e.modulus());
}

}  // namespace

FieldElement FieldElement::operator+(const FieldElement& other) const {
  assert(modulus_ == other.modulus_);
  uint64_t s = uint64_t{value_} + other.value_;
  return FieldElement(static_cast<uint32_t>(s >= modulus_ ? s - modulus_ : s),
                      modulus_);
}

FieldElement FieldElement::operator-(const FieldElement& other) const {
  assert(modulus_ == other.modulus_);
  return FieldElement(value_ >= other.value_
                          ? value_ - other.value_
                          : value_ + modulus_ - other.value_,
                      modulus_);
}

FieldElement FieldElement::operator*(const FieldElement& other) const {
  assert(modulus_ == other.modulus_);
  return FieldElement(
      static_cast<uint32_t>(uint64_t{value_} * other.value_ % modulus_),
      modulus_);
}

FieldElement FieldElement::operator-() const {
  return FieldElement(value_ == 0 ? 0 : modulus_ - value_, modulus_);
}

absl::StatusOr<FieldElement> ApplyFieldOp(const FieldElement& a,
                                          const FieldElement& b, FieldOp op) {
  if (a.modulus() != b.modulus()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("field mismatch: GF(%u) vs GF(%u)", a.modulus(),
                        b.modulus()));
  }
  switch (op) {
    case FieldOp::kAdd:
      return a + b;
    case FieldOp::kSub:
      return a - b;
    case FieldOp::kMul:
      return a * b;
    case FieldOp::kDiv: {
      PrimeField field = FieldOf(a);
      absl::StatusOr<uint32_t> inv = field.Inverse(b.value());
      if (!inv.ok()) return inv.status();
      return FieldElement(field.Mul(a.value(), *inv), field);
    }
  }
  return absl::InvalidArgumentError("unknown field operation");
}

absl::StatusOr<FieldMatrix> FieldMatrix::FromRows(
    const PrimeField& field, const std::vector<std::vector<int64_t>>& rows) {
  size_t cols = rows.empty() ? 0 : rows.front().size();
  FieldMatrix m(field, rows.size(), cols);
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      return absl::InvalidArgumentError(
          absl::StrFormat("ragged matrix: row %d has %d entries, expected %d",
                          r, rows[r].size(), cols));
    }
    for (size_t c = 0; c < cols; ++c) {
      m.entries_[r * cols + c] = field.Reduce(rows[r][c]);
    }
  }
  return m;
}

FieldMatrix FieldMatrix::Identity(const PrimeField& field, size_t size) {
  FieldMatrix m(field, size, size);
  for (size_t i = 0; i < size; ++i) m.entries_[i * size + i] = 1;
  return m;
}

absl::StatusOr<FieldMatrix> FieldMatrix::Multiply(
    const FieldMatrix& other) const {
  if (field_ != other.field_) {
    return absl::InvalidArgumentError("matrix field mismatch");
  }
  if (cols_ != other.rows_) {
    return absl::InvalidArgumentError(
        absl::StrFormat("cannot multiply %dx%d by %dx%d", rows_, cols_,
                        other.rows_, other.cols_));
  }
  FieldMatrix out(field_, rows_, other.cols_);
  for (size_t r = 0; r < rows_; ++r) {
    for (size_t i = 0; i < cols_; ++i) {
      uint32_t a = at(r, i);
      if (a == 0) continue;
      for (size_t c = 0; c < other.cols_; ++c) {
        uint32_t& dst = out.entries_[r * other.cols_ + c];
        dst = field_.Add(dst, field_.Mul(a, other.at(i, c)));
      }
    }
  }
  return out;
}

absl::StatusOr<std::vector<uint32_t>> FieldMatrix::LeftMultiply(
    std::span<const uint32_t> vector) const {
  if (vector.size() != rows_) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "vector of length %d does not match %d rows", vector.size(), rows_));
  }
  std::vector<uint32_t> out(cols_, 0);
  for (size_t r = 0; r < rows_; ++r) {
    uint32_t a = field_.Reduce(vector[r]);
    if (a == 0) continue;
    for (size_t c = 0; c < cols_; ++c) {
      out[c] = field_.Add(out[c], field_.Mul(a, at(r, c)));
    }
  }
  return out;
}

FieldMatrix FieldMatrix::SelectColumns(std::span<const size_t> columns) const {
  FieldMatrix out(field_, rows_, columns.size());
  for (size_t r = 0; r < rows_; ++r) {
    for (size_t i = 0; i < columns.size(); ++i) {
      out.entries_[r * columns.size() + i] = at(r, columns[i]);
    }
  }
  return out;
}

namespace {

// In-place Gauss-Jordan on `rows` x `width` residues; the first `pivot_cols`
// columns are eligible for pivots. Returns the pivot columns in row order.
std::vector<size_t> ReduceRowEchelon(const PrimeField& field,
                                     std::vector<uint32_t>& cells, size_t rows,
                                     size_t width, size_t pivot_cols) {
  std::vector<size_t> pivots;
  size_t lead_row = 0;
  for (size_t col = 0; col < pivot_cols && lead_row < rows; ++col) {
    size_t found = rows;
    for (size_t r = lead_row; r < rows; ++r) {
      if (cells[r * width + col] != 0) {
        found = r;
        break;
      }
    }
    if (found == rows) continue;
    if (found != lead_row) {
      for (size_t c = 0; c < width; ++c) {
        std::swap(cells[found * width + c], cells[lead_row * width + c]);
      }
    }
    uint32_t inv = field.InverseUnchecked(cells[lead_row * width + col]);
    for (size_t c = 0; c < width; ++c) {
      cells[lead_row * width + c] = field.Mul(cells[lead_row * width + c], inv);
    }
    for (size_t r = 0; r < rows; ++r) {
      if (r == lead_row) continue;
      uint32_t factor = cells[r * width + col];
      if (factor == 0) continue;
      for (size_t c = 0; c < width; ++c) {
        cells[r * width + c] =
            field.Sub(cells[r * width + c],
                      field.Mul(factor, cells[lead_row * width + c]));
      }
    }
    pivots.push_back(col);
    ++lead_row;
  }
  return pivots;
}

}  // namespace

size_t FieldMatrix::Rank() const {
  std::vector<uint32_t> cells = entries_;
  return ReduceRowEchelon(field_, cells, rows_, cols_, cols_).size();
}

absl::StatusOr<FieldMatrix> FieldMatrix::Inverse() const {
  if (rows_ != cols_) {
    return absl::InvalidArgumentError("only square matrices are invertible");
  }
  size_t n = rows_;
  size_t width = 2 * n;
  std::vector<uint32_t> cells(n * width, 0);
  for (size_t r = 0; r < n; ++r) {
    for (size_t c = 0; c < n; ++c) cells[r * width + c] = at(r, c);
    cells[r * width + n + r] = 1;
  }
  if (ReduceRowEchelon(field_, cells, n, width, n).size() != n) {
    return absl::InvalidArgumentError("matrix is singular");
  }
  FieldMatrix out(field_, n, n);
  for (size_t r = 0; r < n; ++r) {
    for (size_t c = 0; c < n; ++c) {
      out.entries_[r * n + c] = cells[r * width + n + c];
    }
  }
  return out;
}

std::string FieldMatrix::DebugString() const {
  std::string out;
  for (size_t r = 0; r < rows_; ++r) {
    absl::StrAppend(&out, absl::StrJoin(row(r), " "), "\n");
  }
  return out;
}

absl::StatusOr<LinearSolution> SolveLinear(const FieldMatrix& a,
                                           std::span<const uint32_t> b) {
  if (a.rows() != b.size()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("right-hand side has %d entries for %d equations",
                        b.size(), a.rows()));
  }
  const PrimeField& field = a.field();
  size_t rows = a.rows();
  size_t unknowns = a.cols();
  size_t width = unknowns + 1;
  std::vector<uint32_t> cells(rows * width);
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < unknowns; ++c) cells[r * width + c] = a.at(r, c);
    cells[r * width + unknowns] = field.Reduce(b[r]);
  }
  LinearSolution out;
  out.pivot_columns = ReduceRowEchelon(field, cells, rows, width, unknowns);
  out.rank = out.pivot_columns.size();
  // Any nonzero right-hand side below the pivot rows means 0 = c.
  for (size_t r = out.rank; r < rows; ++r) {
    if (cells[r * width + unknowns] != 0) {
      out.feasible = false;
      return out;
    }
  }
  out.feasible = true;
  std::vector<bool> is_pivot(unknowns, false);
  for (size_t col : out.pivot_columns) is_pivot[col] = true;
  for (size_t c = 0; c < unknowns; ++c) {
    if (!is_pivot[c]) out.free_columns.push_back(c);
  }
  out.values.assign(unknowns, std::nullopt);
  out.particular.assign(unknowns, 0);
  for (size_t r = 0; r < out.rank; ++r) {
    size_t col = out.pivot_columns[r];
    uint32_t rhs = cells[r * width + unknowns];
    out.particular[col] = rhs;
    bool depends_on_free = false;
    for (size_t f : out.free_columns) {
      if (cells[r * width + f] != 0) {
        depends_on_free = true;
        break;
      }
    }
    if (!depends_on_free) out.values[col] = rhs;
  }
  return out;
}

}  // namespace wpir
