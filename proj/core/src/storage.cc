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

#include "wpir/storage.h"

#include <numeric>
#include <random>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "wpir/status_macros.h"

namespace wpir {

absl::StatusOr<EffectiveParams> EffectiveParams::Compute(int servers,
                                                         int dimension) {
  if (dimension < 1 || servers <= dimension) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "need N > K >= 1 for retrieval redundancy, got N=%d K=%d", servers,
        dimension));
  }
  int g = std::gcd(servers, dimension);
  EffectiveParams p;
  p.n = servers / g;
  p.k = dimension / g;
  p.r = p.n - p.k;
  p.lambda = p.n - p.k;
  return p;
}

absl::StatusOr<FileSet> FileSet::Create(const PrimeField& field, int lambda,
                                        int dimension,
                                        std::vector<FieldMatrix> files) {
  if (lambda < 1 || dimension < 1) {
    return absl::InvalidArgumentError("file dimensions must be positive");
  }
  for (size_t m = 0; m < files.size(); ++m) {
    const FieldMatrix& f = files[m];
    if (f.field() != field) {
      return absl::InvalidArgumentError(
          absl::StrFormat("file %d is over a different field", m + 1));
    }
    if (f.rows() != static_cast<size_t>(lambda) ||
        f.cols() != static_cast<size_t>(dimension)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "file %d is %dx%d, expected %dx%d", m + 1, f.rows(), f.cols(),
          lambda, dimension));
    }
  }
  return FileSet(field, lambda, dimension, std::move(files));
}

FileSet FileSet::Zero(const PrimeField& field, int files, int lambda,
                      int dimension) {
  std::vector<FieldMatrix> out(files, FieldMatrix(field, lambda, dimension));
  return FileSet(field, lambda, dimension, std::move(out));
}

FileSet FileSet::Random(const PrimeField& field, int files, int lambda,
                        int dimension, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<uint32_t> symbol(0, field.modulus() - 1);
  std::vector<FieldMatrix> out;
  out.reserve(files);
  for (int m = 0; m < files; ++m) {
    FieldMatrix f(field, lambda, dimension);
    for (int r = 0; r < lambda; ++r) {
      for (int c = 0; c < dimension; ++c) f.set(r, c, symbol(rng));
    }
    out.push_back(std::move(f));
  }
  return FileSet(field, lambda, dimension, std::move(out));
}

absl::StatusOr<FileSet> FileSet::ParseText(absl::string_view text,
                                           const PrimeField& field, int lambda,
                                           int dimension) {
  std::vector<FieldMatrix> files;
  std::vector<std::vector<int64_t>> block;
  auto flush = [&]() -> absl::Status {
    if (block.empty()) return absl::OkStatus();
    WPIR_ASSIGN_OR_RETURN(FieldMatrix f, FieldMatrix::FromRows(field, block));
    files.push_back(std::move(f));
    block.clear();
    return absl::OkStatus();
  };
  int line_number = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    absl::string_view trimmed = absl::StripAsciiWhitespace(line);
    if (!trimmed.empty() && trimmed.front() == '#') continue;
    if (trimmed.empty()) {
      WPIR_RETURN_IF_ERROR(flush());
      continue;
    }
    std::vector<int64_t> row;
    for (absl::string_view token :
         absl::StrSplit(trimmed, ' ', absl::SkipEmpty())) {
      int64_t value = 0;
      if (!absl::SimpleAtoi(token, &value) || value < 0 ||
          value >= static_cast<int64_t>(field.modulus())) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "line %d: '%s' is not a residue mod %u", line_number, token,
            field.modulus()));
      }
      row.push_back(value);
    }
    block.push_back(std::move(row));
  }
  WPIR_RETURN_IF_ERROR(flush());
  return Create(field, lambda, dimension, std::move(files));
}

std::string FileSet::ToText() const {
  std::string out;
  for (size_t m = 0; m < files_.size(); ++m) {
    if (m > 0) out += "\n";
    for (size_t r = 0; r < files_[m].rows(); ++r) {
      absl::StrAppend(&out, absl::StrJoin(files_[m].row(r), " "), "\n");
    }
  }
  return out;
}

absl::StatusOr<EncodedStorage> EncodedStorage::Encode(const FileSet& files,
                                                      const MdsCode& code) {
  WPIR_ASSIGN_OR_RETURN(
      EffectiveParams params,
      EffectiveParams::Compute(code.length(), code.dimension()));
  if (files.field() != code.field()) {
    return absl::InvalidArgumentError("files and code use different fields");
  }
  if (files.lambda() != params.lambda ||
      files.dimension() != code.dimension()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "files are %dx%d but the code needs %dx%d", files.lambda(),
        files.dimension(), params.lambda, code.dimension()));
  }
  int num_files = files.num_files();
  std::vector<ServerColumn> columns(code.length(),
                                    ServerColumn(num_files, params.n));
  for (int m = 1; m <= num_files; ++m) {
    const FieldMatrix& w = files.file(m);
    for (int i = 0; i < params.lambda; ++i) {
      WPIR_ASSIGN_OR_RETURN(std::vector<uint32_t> codeword,
                            code.Encode(w.row(i)));
      for (int j = 1; j <= code.length(); ++j) {
        columns[j - 1].set(m, i, codeword[j - 1]);
      }
    }
    // Rows [lambda, n-1] stay zero: the dummy rows.
  }
  return EncodedStorage(code, params, num_files, std::move(columns));
}

absl::StatusOr<ServerColumn> EncodedStorage::Column(int j) const {
  if (j < 1 || j > num_servers()) {
    return absl::OutOfRangeError(
        absl::StrFormat("server %d outside [1:%d]", j, num_servers()));
  }
  return columns_[j - 1];
}

}  // namespace wpir
