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

// Strategy alphabets, query encoders and the server answer function for the
// ZYQT, ZTSL and OLR weakly-private retrieval schemes, plus the cyclic
// time-sharing wrapper that equalizes what each server observes.

#ifndef WPIR_SCHEMES_H_
#define WPIR_SCHEMES_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "wpir/finite_field.h"
#include "wpir/storage.h"

namespace wpir {

enum class SchemeKind : uint8_t { kZyqt = 0, kZtsl = 1, kOlr = 2 };

absl::string_view SchemeName(SchemeKind kind);
absl::StatusOr<SchemeKind> ParseSchemeKind(absl::string_view name);

// Small matrix of row indices. Cells are stored column-major, so the
// defaulted ordering is lexicographic over the tuple of columns.
template <typename Tag>
class IndexMatrix {
 public:
  IndexMatrix() = default;
  IndexMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), cells_(static_cast<size_t>(rows) * cols, 0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int at(int r, int c) const {
    return cells_[static_cast<size_t>(c) * rows_ + r];
  }
  void set(int r, int c, int value) {
    cells_[static_cast<size_t>(c) * rows_ + r] = static_cast<uint8_t>(value);
  }
  std::span<const uint8_t> column(int c) const {
    return {cells_.data() + static_cast<size_t>(c) * rows_,
            static_cast<size_t>(rows_)};
  }
  const std::vector<uint8_t>& column_major() const { return cells_; }

  // "r0c0 r0c1/r1c0 r1c1": rows separated by '/', entries by spaces.
  std::string ToString() const {
    std::string out;
    for (int r = 0; r < rows_; ++r) {
      if (r > 0) out += '/';
      for (int c = 0; c < cols_; ++c) {
        if (c > 0) out += ' ';
        out += std::to_string(at(r, c));
      }
    }
    return out;
  }

  friend auto operator<=>(const IndexMatrix&, const IndexMatrix&) = default;
  friend bool operator==(const IndexMatrix&, const IndexMatrix&) = default;

  template <typename H>
  friend H AbslHashValue(H h, const IndexMatrix& m) {
    return H::combine(std::move(h), m.rows_, m.cols_, m.cells_);
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<uint8_t> cells_;
};

struct QueryTag {};
struct StrategyTag {};
// k x M matrix sent to one server; column m' selects rows of file m'.
using QueryMatrix = IndexMatrix<QueryTag>;
// One realization of the global random strategy. Shape depends on the
// scheme: ZYQT k x M, ZTSL 1 x M, OLR k x (M-1).
using Strategy = IndexMatrix<StrategyTag>;

// Parses the ToString() form back into a query.
absl::StatusOr<QueryMatrix> ParseQueryMatrix(absl::string_view text);

// A column of k pairwise-distinct row indices in [0:n-1].
struct PermSelector {
  std::vector<uint8_t> entries;
  friend auto operator<=>(const PermSelector&, const PermSelector&) = default;
};

// All n!/(n-k)! selectors in lexicographic order.
absl::StatusOr<std::vector<PermSelector>> EnumeratePnk(int n, int k);

class StrategyAlphabet {
 public:
  static constexpr size_t kDefaultLimit = size_t{1} << 22;

  // Members are deduplicated and sorted lexicographically (column tuples).
  // Fails with ResourceExhausted if the alphabet would exceed `limit`.
  static absl::StatusOr<StrategyAlphabet> Enumerate(
      SchemeKind kind, int n, int k, int files, size_t limit = kDefaultLimit);

  // Closed forms for ZYQT and ZTSL; OLR is counted by enumeration.
  static absl::StatusOr<uint64_t> Cardinality(SchemeKind kind, int n, int k,
                                              int files);

  SchemeKind kind() const { return kind_; }
  size_t size() const { return members_.size(); }
  const Strategy& operator[](size_t i) const { return members_[i]; }
  const std::vector<Strategy>& members() const { return members_; }
  std::optional<size_t> IndexOf(const Strategy& s) const;

 private:
  StrategyAlphabet(SchemeKind kind, std::vector<Strategy> members)
      : kind_(kind), members_(std::move(members)) {}

  SchemeKind kind_;
  std::vector<Strategy> members_;
};

// Base query encoders (no time sharing). m in [1:M], j in [1:N].
absl::StatusOr<QueryMatrix> QueryZyqt(const EffectiveParams& params,
                                      int files, int servers, int m,
                                      const Strategy& s, int j);
absl::StatusOr<QueryMatrix> QueryZtsl(const EffectiveParams& params,
                                      int files, int servers, int m,
                                      const Strategy& s, int j);
absl::StatusOr<QueryMatrix> QueryOlr(const EffectiveParams& params, int files,
                                     int servers, int m, const Strategy& s,
                                     int j);

// An (M, N, K) scheme instance with its enumerated strategy alphabet.
class Scheme {
 public:
  static absl::StatusOr<Scheme> Create(
      SchemeKind kind, int files, int servers, int dimension,
      size_t alphabet_limit = StrategyAlphabet::kDefaultLimit);

  SchemeKind kind() const { return kind_; }
  int num_files() const { return files_; }
  int num_servers() const { return servers_; }
  int dimension() const { return dimension_; }
  const EffectiveParams& params() const { return params_; }
  const StrategyAlphabet& alphabet() const { return alphabet_; }

  // The base encoder of this scheme's kind.
  absl::StatusOr<QueryMatrix> BaseQuery(int m, const Strategy& s, int j) const;

  // sigma^l(j) = ((j - 1 + l) mod N) + 1.
  int ShiftServer(int shift, int j) const {
    return ((j - 1 + shift) % servers_) + 1;
  }

  // Query sent to server j under time-sharing shift t in [1:N]: the base
  // query of server sigma^(t-1)(j).
  absl::StatusOr<QueryMatrix> TimeSharedQuery(int m, const Strategy& s, int t,
                                              int j) const;

 private:
  Scheme(SchemeKind kind, int files, int servers, int dimension,
         EffectiveParams params, StrategyAlphabet alphabet)
      : kind_(kind),
        files_(files),
        servers_(servers),
        dimension_(dimension),
        params_(params),
        alphabet_(std::move(alphabet)) {}

  SchemeKind kind_;
  int files_;
  int servers_;
  int dimension_;
  EffectiveParams params_;
  StrategyAlphabet alphabet_;
};

// Number of sub-responses that touch at least one non-dummy row:
// sum_i 1{ min_m' q[i][m'] <= n - k - 1 }.
int AnswerLength(const QueryMatrix& q, const EffectiveParams& params);

// psi_j(q, X_j): k sub-responses; those referencing only dummy rows are
// suppressed (std::nullopt) and never transmitted.
struct Answer {
  std::vector<std::optional<uint32_t>> sub_responses;

  int length() const;
  std::vector<uint32_t> Transmitted() const;
};

absl::StatusOr<Answer> ComputeAnswer(const QueryMatrix& q,
                                     const ServerColumn& column,
                                     const EffectiveParams& params,
                                     const PrimeField& field);

// A relabeling of rows and files that maps the scheme onto itself:
// query cell (i, c) moves to (row_perm[i], file_perm[c]) and strategy s
// moves to strategy_perm[s]. Used to shrink the leakage program; callers
// verify the relabeling against the exact query tables before relying on it.
struct Relabeling {
  std::vector<int> row_perm;
  std::vector<int> file_perm;
  std::vector<size_t> strategy_perm;
};

QueryMatrix ApplyRelabeling(const Relabeling& g, const QueryMatrix& q);

// Adjacent transpositions generating the candidate symmetry group:
// files and rows for ZYQT, files for ZTSL, rows for OLR.
std::vector<Relabeling> CandidateSymmetries(const Scheme& scheme);

}  // namespace wpir

#endif  // WPIR_SCHEMES_H_
