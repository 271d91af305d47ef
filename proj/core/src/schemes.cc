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

#include "wpir/schemes.h"

#include <algorithm>
#include <numeric>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "wpir/status_macros.h"

namespace wpir {

absl::string_view SchemeName(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kZyqt:
      return "zyqt";
    case SchemeKind::kZtsl:
      return "ztsl";
    case SchemeKind::kOlr:
      return "olr";
  }
  return "unknown";
}

absl::StatusOr<SchemeKind> ParseSchemeKind(absl::string_view name) {
  std::string lower = absl::AsciiStrToLower(name);
  if (lower == "zyqt") return SchemeKind::kZyqt;
  if (lower == "ztsl") return SchemeKind::kZtsl;
  if (lower == "olr") return SchemeKind::kOlr;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown scheme '%s' (expected zyqt, ztsl or olr)", name));
}

absl::StatusOr<QueryMatrix> ParseQueryMatrix(absl::string_view text) {
  std::vector<std::vector<int>> rows;
  for (absl::string_view row : absl::StrSplit(text, '/')) {
    std::vector<int> entries;
    for (absl::string_view token : absl::StrSplit(row, ' ', absl::SkipEmpty())) {
      int value = 0;
      if (!absl::SimpleAtoi(token, &value) || value < 0 || value > 255) {
        return absl::InvalidArgumentError(
            absl::StrFormat("bad query entry '%s'", token));
      }
      entries.push_back(value);
    }
    rows.push_back(std::move(entries));
  }
  if (rows.empty() || rows.front().empty()) {
    return absl::InvalidArgumentError("empty query matrix");
  }
  QueryMatrix q(static_cast<int>(rows.size()),
                static_cast<int>(rows.front().size()));
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows.front().size()) {
      return absl::InvalidArgumentError("ragged query matrix");
    }
    for (size_t c = 0; c < rows[r].size(); ++c) {
      q.set(static_cast<int>(r), static_cast<int>(c), rows[r][c]);
    }
  }
  return q;
}

absl::StatusOr<std::vector<PermSelector>> EnumeratePnk(int n, int k) {
  if (k < 1 || k > n || n > 255) {
    return absl::InvalidArgumentError(
        absl::StrFormat("need 1 <= k <= n <= 255, got n=%d k=%d", n, k));
  }
  std::vector<PermSelector> out;
  std::vector<uint8_t> current;
  std::vector<bool> used(n, false);
  // Depth-first in increasing entry order yields lexicographic output.
  auto extend = [&](auto&& self) -> void {
    if (static_cast<int>(current.size()) == k) {
      out.push_back(PermSelector{current});
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (used[v]) continue;
      used[v] = true;
      current.push_back(static_cast<uint8_t>(v));
      self(self);
      current.pop_back();
      used[v] = false;
    }
  };
  extend(extend);
  return out;
}

namespace {

bool DistinctEntries(std::span<const uint8_t> column) {
  for (size_t a = 0; a < column.size(); ++a) {
    for (size_t b = a + 1; b < column.size(); ++b) {
      if (column[a] == column[b]) return false;
    }
  }
  return true;
}

// Entrywise (-sum of columns) mod n of a k-row strategy.
std::vector<uint8_t> ImpliedColumn(const Strategy& s, int n) {
  std::vector<uint8_t> out(s.rows(), 0);
  for (int i = 0; i < s.rows(); ++i) {
    int sum = 0;
    for (int c = 0; c < s.cols(); ++c) sum += s.at(i, c);
    out[i] = static_cast<uint8_t>(((n - sum % n) % n));
  }
  return out;
}

absl::Status CheckShape(const Strategy& s, int rows, int cols, int n) {
  if (s.rows() != rows || s.cols() != cols) {
    return absl::InvalidArgumentError(
        absl::StrFormat("strategy is %dx%d, expected %dx%d", s.rows(),
                        s.cols(), rows, cols));
  }
  for (uint8_t v : s.column_major()) {
    if (v >= n) {
      return absl::InvalidArgumentError(
          absl::StrFormat("strategy entry %d outside [0:%d]", v, n - 1));
    }
  }
  return absl::OkStatus();
}

absl::Status CheckIndices(int files, int servers, int m, int j) {
  if (m < 1 || m > files) {
    return absl::OutOfRangeError(
        absl::StrFormat("file index %d outside [1:%d]", m, files));
  }
  if (j < 1 || j > servers) {
    return absl::OutOfRangeError(
        absl::StrFormat("server index %d outside [1:%d]", j, servers));
  }
  return absl::OkStatus();
}

// Applies a row permutation and column permutation to a strategy.
Strategy PermuteStrategy(const Strategy& s, std::span<const int> row_perm,
                         std::span<const int> col_perm) {
  Strategy out(s.rows(), s.cols());
  for (int r = 0; r < s.rows(); ++r) {
    for (int c = 0; c < s.cols(); ++c) {
      out.set(row_perm[r], col_perm[c], s.at(r, c));
    }
  }
  return out;
}

absl::StatusOr<uint64_t> CheckedPow(uint64_t base, int exponent) {
  uint64_t out = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && out > UINT64_MAX / base) {
      return absl::ResourceExhaustedError("alphabet size overflows 64 bits");
    }
    out *= base;
  }
  return out;
}

}  // namespace

absl::StatusOr<StrategyAlphabet> StrategyAlphabet::Enumerate(SchemeKind kind,
                                                             int n, int k,
                                                             int files,
                                                             size_t limit) {
  if (files < 1) {
    return absl::InvalidArgumentError("need at least one file");
  }
  WPIR_ASSIGN_OR_RETURN(std::vector<PermSelector> pnk, EnumeratePnk(n, k));
  std::vector<Strategy> members;

  switch (kind) {
    case SchemeKind::kZyqt:
    case SchemeKind::kOlr: {
      int cols = kind == SchemeKind::kZyqt ? files : files - 1;
      WPIR_ASSIGN_OR_RETURN(uint64_t candidates, CheckedPow(pnk.size(), cols));
      if (kind == SchemeKind::kZyqt && candidates > limit) {
        return absl::ResourceExhaustedError(absl::StrFormat(
            "ZYQT alphabet has %d members, above the limit %d", candidates,
            limit));
      }
      if (kind == SchemeKind::kOlr && candidates > 64 * uint64_t{limit}) {
        return absl::ResourceExhaustedError(absl::StrFormat(
            "OLR candidate space has %d tuples, too many to filter",
            candidates));
      }
      // Odometer over column choices; column 0 is the most significant
      // digit so the output is lexicographic.
      std::vector<size_t> digits(cols, 0);
      while (true) {
        Strategy s(k, cols);
        for (int c = 0; c < cols; ++c) {
          for (int i = 0; i < k; ++i) s.set(i, c, pnk[digits[c]].entries[i]);
        }
        if (kind == SchemeKind::kZyqt || DistinctEntries(ImpliedColumn(s, n))) {
          if (members.size() >= limit) {
            return absl::ResourceExhaustedError(absl::StrFormat(
                "alphabet exceeds the limit %d", limit));
          }
          members.push_back(std::move(s));
        }
        int c = cols - 1;
        while (c >= 0 && ++digits[c] == pnk.size()) digits[c--] = 0;
        if (c < 0) break;
      }
      break;
    }
    case SchemeKind::kZtsl: {
      WPIR_ASSIGN_OR_RETURN(uint64_t count, CheckedPow(n, files - 1));
      if (count > limit) {
        return absl::ResourceExhaustedError(absl::StrFormat(
            "ZTSL alphabet has %d members, above the limit %d", count, limit));
      }
      std::vector<int> digits(files - 1, 0);
      while (true) {
        Strategy s(1, files);
        int sum = 0;
        for (int c = 0; c < files - 1; ++c) {
          s.set(0, c, digits[c]);
          sum += digits[c];
        }
        s.set(0, files - 1, (n - sum % n) % n);
        members.push_back(std::move(s));
        int c = files - 2;
        while (c >= 0 && ++digits[c] == n) digits[c--] = 0;
        if (c < 0) break;
      }
      break;
    }
    default:
      return absl::InvalidArgumentError("unknown scheme kind");
  }
  if (members.empty()) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "%s alphabet is empty for n=%d k=%d M=%d", SchemeName(kind), n, k,
        files));
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return StrategyAlphabet(kind, std::move(members));
}

absl::StatusOr<uint64_t> StrategyAlphabet::Cardinality(SchemeKind kind, int n,
                                                       int k, int files) {
  if (files < 1) return absl::InvalidArgumentError("need at least one file");
  WPIR_ASSIGN_OR_RETURN(std::vector<PermSelector> pnk, EnumeratePnk(n, k));
  switch (kind) {
    case SchemeKind::kZyqt:
      return CheckedPow(pnk.size(), files);
    case SchemeKind::kZtsl:
      return CheckedPow(n, files - 1);
    case SchemeKind::kOlr: {
      WPIR_ASSIGN_OR_RETURN(StrategyAlphabet a,
                            Enumerate(kind, n, k, files, kDefaultLimit));
      return a.size();
    }
  }
  return absl::InvalidArgumentError("unknown scheme kind");
}

std::optional<size_t> StrategyAlphabet::IndexOf(const Strategy& s) const {
  auto it = std::lower_bound(members_.begin(), members_.end(), s);
  if (it == members_.end() || *it != s) return std::nullopt;
  return static_cast<size_t>(it - members_.begin());
}

absl::StatusOr<QueryMatrix> QueryZyqt(const EffectiveParams& params,
                                      int files, int servers, int m,
                                      const Strategy& s, int j) {
  WPIR_RETURN_IF_ERROR(CheckIndices(files, servers, m, j));
  WPIR_RETURN_IF_ERROR(CheckShape(s, params.k, files, params.n));
  QueryMatrix q(params.k, files);
  int shift = (j - 1) % params.n;
  for (int c = 0; c < files; ++c) {
    if (!DistinctEntries(s.column(c))) {
      return absl::InvalidArgumentError("ZYQT strategy column repeats a row");
    }
    for (int i = 0; i < params.k; ++i) {
      int v = s.at(i, c);
      q.set(i, c, c == m - 1 ? (v + shift) % params.n : v);
    }
  }
  return q;
}

absl::StatusOr<QueryMatrix> QueryZtsl(const EffectiveParams& params,
                                      int files, int servers, int m,
                                      const Strategy& s, int j) {
  WPIR_RETURN_IF_ERROR(CheckIndices(files, servers, m, j));
  WPIR_RETURN_IF_ERROR(CheckShape(s, 1, files, params.n));
  int sum = 0;
  for (int c = 0; c < files; ++c) sum += s.at(0, c);
  if (sum % params.n != 0) {
    return absl::InvalidArgumentError("ZTSL strategy does not sum to 0 mod n");
  }
  QueryMatrix q(params.k, files);
  int shift = (j - 1) % params.n;
  for (int i = 0; i < params.k; ++i) {
    for (int c = 0; c < files; ++c) {
      int v = s.at(0, c) + (c == m - 1 ? shift : 0) + i;
      q.set(i, c, v % params.n);
    }
  }
  return q;
}

absl::StatusOr<QueryMatrix> QueryOlr(const EffectiveParams& params, int files,
                                     int servers, int m, const Strategy& s,
                                     int j) {
  WPIR_RETURN_IF_ERROR(CheckIndices(files, servers, m, j));
  WPIR_RETURN_IF_ERROR(CheckShape(s, params.k, files - 1, params.n));
  for (int c = 0; c < files - 1; ++c) {
    if (!DistinctEntries(s.column(c))) {
      return absl::InvalidArgumentError("OLR strategy column repeats a row");
    }
  }
  std::vector<uint8_t> implied = ImpliedColumn(s, params.n);
  if (!DistinctEntries(implied)) {
    return absl::InvalidArgumentError(
        "OLR strategy implies a column with repeated rows");
  }
  QueryMatrix q(params.k, files);
  int shift = (j - 1) % params.n;
  for (int c = 0; c < files; ++c) {
    for (int i = 0; i < params.k; ++i) {
      int v;
      if (c < m - 1) {
        v = s.at(i, c);
      } else if (c == m - 1) {
        v = (implied[i] + shift) % params.n;
      } else {
        v = s.at(i, c - 1);
      }
      q.set(i, c, v);
    }
  }
  return q;
}

absl::StatusOr<Scheme> Scheme::Create(SchemeKind kind, int files, int servers,
                                      int dimension, size_t alphabet_limit) {
  WPIR_ASSIGN_OR_RETURN(EffectiveParams params,
                        EffectiveParams::Compute(servers, dimension));
  if (servers > 255) {
    return absl::InvalidArgumentError("at most 255 servers are supported");
  }
  WPIR_ASSIGN_OR_RETURN(
      StrategyAlphabet alphabet,
      StrategyAlphabet::Enumerate(kind, params.n, params.k, files,
                                  alphabet_limit));
  return Scheme(kind, files, servers, dimension, params, std::move(alphabet));
}

absl::StatusOr<QueryMatrix> Scheme::BaseQuery(int m, const Strategy& s,
                                              int j) const {
  switch (kind_) {
    case SchemeKind::kZyqt:
      return QueryZyqt(params_, files_, servers_, m, s, j);
    case SchemeKind::kZtsl:
      return QueryZtsl(params_, files_, servers_, m, s, j);
    case SchemeKind::kOlr:
      return QueryOlr(params_, files_, servers_, m, s, j);
  }
  return absl::InvalidArgumentError("unknown scheme kind");
}

absl::StatusOr<QueryMatrix> Scheme::TimeSharedQuery(int m, const Strategy& s,
                                                    int t, int j) const {
  if (t < 1 || t > servers_) {
    return absl::OutOfRangeError(
        absl::StrFormat("shift %d outside [1:%d]", t, servers_));
  }
  if (j < 1 || j > servers_) {
    return absl::OutOfRangeError(
        absl::StrFormat("server index %d outside [1:%d]", j, servers_));
  }
  return BaseQuery(m, s, ShiftServer(t - 1, j));
}

int AnswerLength(const QueryMatrix& q, const EffectiveParams& params) {
  int length = 0;
  for (int i = 0; i < q.rows(); ++i) {
    int lowest = params.n;
    for (int c = 0; c < q.cols(); ++c) lowest = std::min(lowest, q.at(i, c));
    if (lowest <= params.n - params.k - 1) ++length;
  }
  return length;
}

int Answer::length() const {
  return static_cast<int>(std::count_if(
      sub_responses.begin(), sub_responses.end(),
      [](const std::optional<uint32_t>& v) { return v.has_value(); }));
}

std::vector<uint32_t> Answer::Transmitted() const {
  std::vector<uint32_t> out;
  for (const auto& v : sub_responses) {
    if (v.has_value()) out.push_back(*v);
  }
  return out;
}

absl::StatusOr<Answer> ComputeAnswer(const QueryMatrix& q,
                                     const ServerColumn& column,
                                     const EffectiveParams& params,
                                     const PrimeField& field) {
  if (q.rows() != params.k || q.cols() != column.num_files() ||
      column.block_height() != params.n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "query %dx%d does not fit a column of %d files x %d rows (k=%d)",
        q.rows(), q.cols(), column.num_files(), column.block_height(),
        params.k));
  }
  Answer answer;
  answer.sub_responses.reserve(q.rows());
  for (int i = 0; i < q.rows(); ++i) {
    bool touches_data = false;
    uint32_t sum = 0;
    for (int c = 0; c < q.cols(); ++c) {
      int row = q.at(i, c);
      if (row >= params.n) {
        return absl::InvalidArgumentError(
            absl::StrFormat("query row index %d outside [0:%d]", row,
                            params.n - 1));
      }
      if (row < params.lambda) touches_data = true;
      sum = field.Add(sum, column.at(c + 1, row));
    }
    if (touches_data) {
      answer.sub_responses.push_back(sum);
    } else {
      answer.sub_responses.push_back(std::nullopt);
    }
  }
  return answer;
}

QueryMatrix ApplyRelabeling(const Relabeling& g, const QueryMatrix& q) {
  QueryMatrix out(q.rows(), q.cols());
  for (int r = 0; r < q.rows(); ++r) {
    for (int c = 0; c < q.cols(); ++c) {
      out.set(g.row_perm[r], g.file_perm[c], q.at(r, c));
    }
  }
  return out;
}

std::vector<Relabeling> CandidateSymmetries(const Scheme& scheme) {
  const int k = scheme.params().k;
  const int files = scheme.num_files();
  const StrategyAlphabet& alphabet = scheme.alphabet();
  std::vector<int> rows_id(k);
  std::iota(rows_id.begin(), rows_id.end(), 0);
  std::vector<int> files_id(files);
  std::iota(files_id.begin(), files_id.end(), 0);

  std::vector<Relabeling> out;
  // Builds the strategy permutation induced by (row_perm, strategy column
  // permutation); drops the candidate if it leaves the alphabet.
  auto add = [&](std::vector<int> row_perm, std::vector<int> file_perm,
                 std::vector<int> strategy_row_perm,
                 std::vector<int> strategy_col_perm) {
    Relabeling g{std::move(row_perm), std::move(file_perm), {}};
    g.strategy_perm.resize(alphabet.size());
    for (size_t i = 0; i < alphabet.size(); ++i) {
      std::optional<size_t> image = alphabet.IndexOf(
          PermuteStrategy(alphabet[i], strategy_row_perm, strategy_col_perm));
      if (!image.has_value()) return;
      g.strategy_perm[i] = *image;
    }
    out.push_back(std::move(g));
  };

  bool permute_files = scheme.kind() != SchemeKind::kOlr;
  bool permute_rows = scheme.kind() != SchemeKind::kZtsl;
  if (permute_files) {
    int strategy_rows = scheme.kind() == SchemeKind::kZtsl ? 1 : k;
    std::vector<int> strategy_rows_id(strategy_rows);
    std::iota(strategy_rows_id.begin(), strategy_rows_id.end(), 0);
    for (int c = 0; c + 1 < files; ++c) {
      std::vector<int> swap_files = files_id;
      std::swap(swap_files[c], swap_files[c + 1]);
      add(rows_id, swap_files, strategy_rows_id, swap_files);
    }
  }
  if (permute_rows) {
    int strategy_cols = scheme.kind() == SchemeKind::kOlr ? files - 1 : files;
    std::vector<int> strategy_cols_id(strategy_cols);
    std::iota(strategy_cols_id.begin(), strategy_cols_id.end(), 0);
    for (int r = 0; r + 1 < k; ++r) {
      std::vector<int> swap_rows = rows_id;
      std::swap(swap_rows[r], swap_rows[r + 1]);
      add(swap_rows, files_id, swap_rows, strategy_cols_id);
    }
  }
  return out;
}

}  // namespace wpir
