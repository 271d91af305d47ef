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

// File model and the per-server stacked columns of coded symbols.
//
// Indexing convention used throughout the library: servers j and files m are
// 1-based (j in [1:N], m in [1:M]); rows within a file block are 0-based
// (i in [0:n-1]), where rows [0:lambda-1] carry code symbols and rows
// [lambda:n-1] are the k all-zero dummy rows.

#ifndef WPIR_STORAGE_H_
#define WPIR_STORAGE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "wpir/finite_field.h"
#include "wpir/mds_code.h"

namespace wpir {

// n = N/g, k = K/g with g = gcd(N, K); r = n - k; subpacketization
// lambda = n - k.
struct EffectiveParams {
  int n = 0;
  int k = 0;
  int r = 0;
  int lambda = 0;

  static absl::StatusOr<EffectiveParams> Compute(int servers, int dimension);

  friend bool operator==(const EffectiveParams&,
                         const EffectiveParams&) = default;
};

// M independent files, each a lambda x K matrix over one field.
class FileSet {
 public:
  static absl::StatusOr<FileSet> Create(const PrimeField& field, int lambda,
                                        int dimension,
                                        std::vector<FieldMatrix> files);
  static FileSet Zero(const PrimeField& field, int files, int lambda,
                      int dimension);
  static FileSet Random(const PrimeField& field, int files, int lambda,
                        int dimension, uint64_t seed);

  // Plain-text import: one matrix row per line, residues separated by
  // spaces, files separated by blank lines. Lines starting with '#' are
  // ignored.
  static absl::StatusOr<FileSet> ParseText(absl::string_view text,
                                           const PrimeField& field, int lambda,
                                           int dimension);
  std::string ToText() const;

  const PrimeField& field() const { return field_; }
  int num_files() const { return static_cast<int>(files_.size()); }
  int lambda() const { return lambda_; }
  int dimension() const { return dimension_; }
  // m is 1-based.
  const FieldMatrix& file(int m) const { return files_[m - 1]; }

 private:
  FileSet(const PrimeField& field, int lambda, int dimension,
          std::vector<FieldMatrix> files)
      : field_(field),
        lambda_(lambda),
        dimension_(dimension),
        files_(std::move(files)) {}

  PrimeField field_;
  int lambda_;
  int dimension_;
  std::vector<FieldMatrix> files_;
};

// X_j: M blocks of n symbols each (lambda code symbols, then k zeros).
class ServerColumn {
 public:
  ServerColumn(int files, int block_height)
      : block_height_(block_height),
        symbols_(static_cast<size_t>(files) * block_height, 0) {}

  int num_files() const {
    return static_cast<int>(symbols_.size()) / block_height_;
  }
  int block_height() const { return block_height_; }
  size_t height() const { return symbols_.size(); }
  // X^(m)_{row, j}; m is 1-based, row 0-based.
  uint32_t at(int m, int row) const {
    return symbols_[static_cast<size_t>(m - 1) * block_height_ + row];
  }
  void set(int m, int row, uint32_t value) {
    symbols_[static_cast<size_t>(m - 1) * block_height_ + row] = value;
  }
  const std::vector<uint32_t>& symbols() const { return symbols_; }

 private:
  int block_height_;
  std::vector<uint32_t> symbols_;
};

class EncodedStorage {
 public:
  // Encodes every data row of every file with `code`. The file dimensions
  // must be (lambda, K) for the code's effective parameters.
  static absl::StatusOr<EncodedStorage> Encode(const FileSet& files,
                                               const MdsCode& code);

  const MdsCode& code() const { return code_; }
  const EffectiveParams& params() const { return params_; }
  int num_servers() const { return static_cast<int>(columns_.size()); }
  int num_files() const { return num_files_; }

  // Checked access to X_j, j in [1:N].
  absl::StatusOr<ServerColumn> Column(int j) const;
  // Unchecked; j in [1:N].
  const ServerColumn& column(int j) const { return columns_[j - 1]; }

 private:
  EncodedStorage(MdsCode code, EffectiveParams params, int num_files,
                 std::vector<ServerColumn> columns)
      : code_(std::move(code)),
        params_(params),
        num_files_(num_files),
        columns_(std::move(columns)) {}

  MdsCode code_;
  EffectiveParams params_;
  int num_files_;
  std::vector<ServerColumn> columns_;
};

}  // namespace wpir

#endif  // WPIR_STORAGE_H_
