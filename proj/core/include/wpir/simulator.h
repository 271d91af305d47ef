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

// In-process client/server retrieval over the wire format, with a generic
// linear decoder used as the retrievability check.

#ifndef WPIR_SIMULATOR_H_
#define WPIR_SIMULATOR_H_

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "wpir/finite_field.h"
#include "wpir/mds_code.h"
#include "wpir/protocol.h"
#include "wpir/schemes.h"
#include "wpir/storage.h"

namespace wpir {

// Files, code and encoded storage for one scheme instance.
class Deployment {
 public:
  // `scheme` must outlive the deployment. The code must be [N, K] for the
  // scheme and the field small enough for 16-bit answer symbols. The code
  // is not MDS-checked here.
  static absl::StatusOr<Deployment> Create(const Scheme& scheme,
                                           FileSet files, MdsCode code);
  // Random files and the systematic Reed-Solomon code over GF(modulus).
  static absl::StatusOr<Deployment> CreateRandom(const Scheme& scheme,
                                                 uint32_t modulus,
                                                 uint64_t seed);

  const Scheme& scheme() const { return *scheme_; }
  const FileSet& files() const { return files_; }
  const EncodedStorage& storage() const { return storage_; }
  const MdsCode& code() const { return storage_.code(); }
  const PrimeField& field() const { return files_.field(); }

 private:
  Deployment(const Scheme* scheme, FileSet files, EncodedStorage storage)
      : scheme_(scheme),
        files_(std::move(files)),
        storage_(std::move(storage)) {}

  const Scheme* scheme_;
  FileSet files_;
  EncodedStorage storage_;
};

// Server j. Stateless: the answer depends only on the query and X_j.
class StorageServer {
 public:
  StorageServer(const Deployment& deployment, int index)
      : deployment_(&deployment), index_(index) {}

  int index() const { return index_; }
  // Parses a query message and returns the serialized answer.
  absl::StatusOr<std::string> Handle(absl::string_view query_message) const;

 private:
  const Deployment* deployment_;
  int index_;
};

// Delivers each query message to the server named in it and returns the
// answer messages, in any order.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual absl::StatusOr<std::vector<std::string>> Exchange(
      const std::vector<std::string>& query_messages) = 0;
};

class InProcessTransport : public Transport {
 public:
  // With a seed, answers come back in a shuffled order.
  explicit InProcessTransport(const Deployment& deployment,
                              std::optional<uint64_t> shuffle_seed = {});

  absl::StatusOr<std::vector<std::string>> Exchange(
      const std::vector<std::string>& query_messages) override;

 private:
  std::vector<StorageServer> servers_;
  std::optional<uint64_t> shuffle_seed_;
  uint64_t exchanges_ = 0;
};

// Solves for all M * lambda * K message symbols from the transmitted
// sub-responses and returns file m. queries[j-1] and answers[j-1] belong to
// server j. Fails with DataLoss on an inconsistent system and with
// FailedPrecondition ("unrecoverable") if a symbol of file m is not
// uniquely determined.
absl::StatusOr<FieldMatrix> Decode(const std::vector<QueryMatrix>& queries,
                                   const std::vector<Answer>& answers,
                                   const MdsCode& code,
                                   const EffectiveParams& params, int files,
                                   int m);

struct RetrievalTranscript {
  int m = 0;
  size_t strategy = 0;  // index into the scheme's alphabet
  int shift = 0;        // t in [1:N]
  std::optional<uint64_t> seed;
  std::vector<QueryMatrix> queries;  // per server
  std::vector<AnswerFrame> answers;  // per server
  std::optional<FieldMatrix> decoded;
  bool success = false;
  std::string failure;
  int downloaded_symbols = 0;
};

// One JSON object per transcript, newline-terminated.
std::string TranscriptToJsonLine(const RetrievalTranscript& transcript);

// Sends N query frames, collects N answer frames and decodes. Malformed
// frames and bad indices are errors; a decode failure or a wrong file gives
// a transcript with success == false.
absl::StatusOr<RetrievalTranscript> RunRetrieval(const Deployment& deployment,
                                                 int m, size_t strategy,
                                                 int shift,
                                                 Transport* transport = nullptr);

struct VerifyOptions {
  enum class Mode { kExhaustive, kSampled };
  Mode mode = Mode::kExhaustive;
  uint64_t samples = 0;
  uint64_t seed = 0;
  // Strategy PMF for sampled mode; empty means uniform.
  std::vector<double> z;
  // Guard on the number of retrievals.
  uint64_t max_retrievals = 2'000'000;
  // Record how often each server saw each query.
  bool count_queries = false;
  // If set, receives one JSON line per retrieval.
  std::ostream* transcript_sink = nullptr;
};

struct RetrievalFailure {
  int m = 0;
  size_t strategy = 0;
  int shift = 0;
  std::string message;
};

struct VerifyReport {
  uint64_t retrievals = 0;
  std::vector<RetrievalFailure> failures;
  uint64_t total_downloaded = 0;
  uint64_t total_downloaded_squared = 0;
  int min_downloaded = 0;
  int max_downloaded = 0;
  // query_counts[j-1][q] when VerifyOptions::count_queries is set.
  std::vector<std::map<QueryMatrix, uint64_t>> query_counts;

  bool ok() const { return failures.empty(); }
  double mean_downloaded() const {
    return retrievals == 0 ? 0.0
                           : static_cast<double>(total_downloaded) / retrievals;
  }
  // Standard error of mean_downloaded().
  double download_standard_error() const;
};

// Exhaustive over every (m, s, t), or `samples` draws of m uniform, s from
// z and t uniform. ResourceExhausted if the run exceeds the guard.
absl::StatusOr<VerifyReport> VerifyRetrievability(
    const Deployment& deployment, const VerifyOptions& options);

}  // namespace wpir

#endif  // WPIR_SIMULATOR_H_
