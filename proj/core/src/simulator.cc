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

#include "wpir/simulator.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "json.hpp"
#include "wpir/leakage.h"
#include "wpir/status_macros.h"

namespace wpir {
namespace {

// Server index byte of a query message, if the message is long enough.
absl::StatusOr<int> PeekServer(absl::string_view message) {
  if (message.size() < kLengthPrefixBytes + 3) {
    return absl::InvalidArgumentError("malformed query frame: too short");
  }
  return static_cast<uint8_t>(message[kLengthPrefixBytes + 2]);
}

// Puts transmitted symbols back at the positions the query implies.
absl::StatusOr<Answer> Reassemble(const QueryMatrix& q,
                                  const AnswerFrame& frame,
                                  const EffectiveParams& params) {
  int expected = AnswerLength(q, params);
  if (static_cast<int>(frame.symbols.size()) != expected) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "server %d sent %d sub-responses, its query implies %d", frame.server,
        frame.symbols.size(), expected));
  }
  Answer answer;
  size_t next = 0;
  for (int i = 0; i < q.rows(); ++i) {
    bool touches_data = false;
    for (int c = 0; c < q.cols(); ++c) {
      if (q.at(i, c) < params.lambda) touches_data = true;
    }
    if (touches_data) {
      answer.sub_responses.push_back(frame.symbols[next++]);
    } else {
      answer.sub_responses.push_back(std::nullopt);
    }
  }
  return answer;
}

}  // namespace

absl::StatusOr<Deployment> Deployment::Create(const Scheme& scheme,
                                              FileSet files, MdsCode code) {
  if (code.length() != scheme.num_servers() ||
      code.dimension() != scheme.dimension()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "code is [%d, %d], scheme needs [%d, %d]", code.length(),
        code.dimension(), scheme.num_servers(), scheme.dimension()));
  }
  if (files.num_files() != scheme.num_files()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%d files given, scheme has M=%d", files.num_files(),
                        scheme.num_files()));
  }
  if (code.field().modulus() >= kMaxWireModulus) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "field modulus %d does not fit 16-bit answer symbols",
        code.field().modulus()));
  }
  WPIR_ASSIGN_OR_RETURN(EncodedStorage storage,
                        EncodedStorage::Encode(files, code));
  if (!(storage.params() == scheme.params())) {
    return absl::InvalidArgumentError("storage and scheme parameters differ");
  }
  return Deployment(&scheme, std::move(files), std::move(storage));
}

absl::StatusOr<Deployment> Deployment::CreateRandom(const Scheme& scheme,
                                                    uint32_t modulus,
                                                    uint64_t seed) {
  WPIR_ASSIGN_OR_RETURN(PrimeField field, PrimeField::Create(modulus));
  WPIR_ASSIGN_OR_RETURN(
      MdsCode code,
      MdsCode::ReedSolomon(scheme.num_servers(), scheme.dimension(), field));
  FileSet files = FileSet::Random(field, scheme.num_files(),
                                  scheme.params().lambda, scheme.dimension(),
                                  seed);
  return Create(scheme, std::move(files), std::move(code));
}

absl::StatusOr<std::string> StorageServer::Handle(
    absl::string_view query_message) const {
  const Scheme& scheme = deployment_->scheme();
  const EffectiveParams& params = scheme.params();
  WPIR_ASSIGN_OR_RETURN(
      QueryFrame frame,
      ParseQueryFrame(query_message, params.k, scheme.num_files()));
  if (frame.server != index_) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "server %d received a frame for server %d", index_, frame.server));
  }
  if (frame.kind != scheme.kind()) {
    return absl::InvalidArgumentError("query frame names another scheme");
  }
  WPIR_ASSIGN_OR_RETURN(
      Answer answer,
      ComputeAnswer(frame.query, deployment_->storage().column(index_),
                    params, deployment_->field()));
  return SerializeAnswerFrame({index_, answer.Transmitted()});
}

InProcessTransport::InProcessTransport(const Deployment& deployment,
                                       std::optional<uint64_t> shuffle_seed)
    : shuffle_seed_(shuffle_seed) {
  for (int j = 1; j <= deployment.scheme().num_servers(); ++j) {
    servers_.emplace_back(deployment, j);
  }
}

absl::StatusOr<std::vector<std::string>> InProcessTransport::Exchange(
    const std::vector<std::string>& query_messages) {
  std::vector<std::string> answers;
  answers.reserve(query_messages.size());
  for (const std::string& message : query_messages) {
    WPIR_ASSIGN_OR_RETURN(int j, PeekServer(message));
    if (j < 1 || j > static_cast<int>(servers_.size())) {
      return absl::InvalidArgumentError(
          absl::StrFormat("query frame addressed to unknown server %d", j));
    }
    WPIR_ASSIGN_OR_RETURN(std::string answer, servers_[j - 1].Handle(message));
    answers.push_back(std::move(answer));
  }
  if (shuffle_seed_.has_value()) {
    std::mt19937_64 rng(*shuffle_seed_ + exchanges_);
    std::shuffle(answers.begin(), answers.end(), rng);
  }
  ++exchanges_;
  return answers;
}

absl::StatusOr<FieldMatrix> Decode(const std::vector<QueryMatrix>& queries,
                                   const std::vector<Answer>& answers,
                                   const MdsCode& code,
                                   const EffectiveParams& params, int files,
                                   int m) {
  const int servers = code.length();
  const int dim = code.dimension();
  if (static_cast<int>(queries.size()) != servers ||
      static_cast<int>(answers.size()) != servers) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "need one query and one answer per server (N=%d)", servers));
  }
  if (m < 1 || m > files) {
    return absl::InvalidArgumentError(
        absl::StrFormat("file index %d outside [1:%d]", m, files));
  }
  const size_t block = static_cast<size_t>(params.lambda) * dim;
  const size_t unknowns = static_cast<size_t>(files) * block;
  auto unknown = [&](int file, int row, int c) {
    return static_cast<size_t>(file - 1) * block +
           static_cast<size_t>(row) * dim + c;
  };

  std::vector<std::vector<uint32_t>> rows;
  std::vector<uint32_t> rhs;
  const PrimeField& field = code.field();
  const FieldMatrix& g = code.generator();
  for (int j = 1; j <= servers; ++j) {
    const QueryMatrix& q = queries[j - 1];
    const Answer& a = answers[j - 1];
    if (q.cols() != files ||
        static_cast<int>(a.sub_responses.size()) != q.rows()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("query and answer shapes disagree at server %d", j));
    }
    for (int i = 0; i < q.rows(); ++i) {
      if (!a.sub_responses[i].has_value()) continue;
      std::vector<uint32_t> row(unknowns, 0);
      for (int f = 1; f <= files; ++f) {
        int data_row = q.at(i, f - 1);
        if (data_row >= params.lambda) continue;  // dummy rows are zero
        for (int c = 0; c < dim; ++c) {
          size_t u = unknown(f, data_row, c);
          row[u] = field.Add(row[u], g.at(c, j - 1));
        }
      }
      rows.push_back(std::move(row));
      rhs.push_back(*a.sub_responses[i]);
    }
  }
  if (rows.empty()) {
    return absl::FailedPreconditionError(
        "unrecoverable: no sub-response was transmitted");
  }
  FieldMatrix a(field, rows.size(), unknowns);
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t u = 0; u < unknowns; ++u) a.set(r, u, rows[r][u]);
  }
  WPIR_ASSIGN_OR_RETURN(LinearSolution solution, SolveLinear(a, rhs));
  if (!solution.feasible) {
    return absl::DataLossError(
        "answers are inconsistent with the queries; a response was corrupted");
  }
  FieldMatrix out(field, params.lambda, dim);
  for (int row = 0; row < params.lambda; ++row) {
    for (int c = 0; c < dim; ++c) {
      size_t u = unknown(m, row, c);
      if (!solution.IsDetermined(u)) {
        return absl::FailedPreconditionError(absl::StrFormat(
            "unrecoverable: symbol (%d, %d) of file %d is not determined", row,
            c, m));
      }
      out.set(row, c, *solution.values[u]);
    }
  }
  return out;
}

std::string TranscriptToJsonLine(const RetrievalTranscript& transcript) {
  nlohmann::ordered_json j;
  j["m"] = transcript.m;
  j["strategy"] = transcript.strategy;
  j["shift"] = transcript.shift;
  if (transcript.seed.has_value()) {
    j["seed"] = *transcript.seed;
  } else {
    j["seed"] = nullptr;
  }
  nlohmann::ordered_json queries = nlohmann::ordered_json::array();
  for (const QueryMatrix& q : transcript.queries) queries.push_back(q.ToString());
  j["queries"] = std::move(queries);
  nlohmann::ordered_json answers = nlohmann::ordered_json::array();
  for (const AnswerFrame& a : transcript.answers) {
    answers.push_back({{"server", a.server}, {"symbols", a.symbols}});
  }
  j["answers"] = std::move(answers);
  if (transcript.decoded.has_value()) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (size_t r = 0; r < transcript.decoded->rows(); ++r) {
      std::span<const uint32_t> row = transcript.decoded->row(r);
      rows.push_back(std::vector<uint32_t>(row.begin(), row.end()));
    }
    j["decoded"] = std::move(rows);
  } else {
    j["decoded"] = nullptr;
  }
  j["success"] = transcript.success;
  j["failure"] = transcript.failure;
  j["downloaded"] = transcript.downloaded_symbols;
  return j.dump() + "\n";
}

absl::StatusOr<RetrievalTranscript> RunRetrieval(const Deployment& deployment,
                                                 int m, size_t strategy,
                                                 int shift,
                                                 Transport* transport) {
  const Scheme& scheme = deployment.scheme();
  const int servers = scheme.num_servers();
  if (m < 1 || m > scheme.num_files()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("file index %d outside [1:%d]", m, scheme.num_files()));
  }
  if (strategy >= scheme.alphabet().size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "strategy %d outside the alphabet of size %d", strategy,
        scheme.alphabet().size()));
  }
  if (shift < 1 || shift > servers) {
    return absl::InvalidArgumentError(
        absl::StrFormat("shift %d outside [1:%d]", shift, servers));
  }

  RetrievalTranscript transcript;
  transcript.m = m;
  transcript.strategy = strategy;
  transcript.shift = shift;
  const Strategy& s = scheme.alphabet()[strategy];
  std::vector<std::string> messages;
  for (int j = 1; j <= servers; ++j) {
    WPIR_ASSIGN_OR_RETURN(QueryMatrix q, scheme.TimeSharedQuery(m, s, shift, j));
    WPIR_ASSIGN_OR_RETURN(std::string message,
                          SerializeQueryFrame({kProtocolVersion, scheme.kind(),
                                               j, q}));
    transcript.queries.push_back(std::move(q));
    messages.push_back(std::move(message));
  }

  InProcessTransport local(deployment);
  if (transport == nullptr) transport = &local;
  WPIR_ASSIGN_OR_RETURN(std::vector<std::string> replies,
                        transport->Exchange(messages));
  if (static_cast<int>(replies.size()) != servers) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "expected %d answer frames, got %d", servers, replies.size()));
  }
  std::vector<std::optional<AnswerFrame>> by_server(servers);
  for (const std::string& reply : replies) {
    WPIR_ASSIGN_OR_RETURN(AnswerFrame frame, ParseAnswerFrame(reply));
    if (frame.server < 1 || frame.server > servers ||
        by_server[frame.server - 1].has_value()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "unexpected or repeated answer from server %d", frame.server));
    }
    by_server[frame.server - 1] = std::move(frame);
  }
  std::vector<Answer> answers;
  for (int j = 1; j <= servers; ++j) {
    const AnswerFrame& frame = *by_server[j - 1];
    WPIR_ASSIGN_OR_RETURN(
        Answer answer,
        Reassemble(transcript.queries[j - 1], frame, scheme.params()));
    answers.push_back(std::move(answer));
    transcript.downloaded_symbols += static_cast<int>(frame.symbols.size());
    transcript.answers.push_back(frame);
  }

  absl::StatusOr<FieldMatrix> decoded =
      Decode(transcript.queries, answers, deployment.code(), scheme.params(),
             scheme.num_files(), m);
  if (!decoded.ok()) {
    transcript.failure = std::string(decoded.status().message());
    return transcript;
  }
  transcript.success = *decoded == deployment.files().file(m);
  if (!transcript.success) {
    transcript.failure = "decoded file differs from the stored file";
  }
  transcript.decoded = *std::move(decoded);
  return transcript;
}

double VerifyReport::download_standard_error() const {
  if (retrievals < 2) return 0.0;
  const double n = static_cast<double>(retrievals);
  const double mean = mean_downloaded();
  const double variance =
      (static_cast<double>(total_downloaded_squared) - n * mean * mean) /
      (n - 1);
  return std::sqrt(std::max(0.0, variance) / n);
}

absl::StatusOr<VerifyReport> VerifyRetrievability(
    const Deployment& deployment, const VerifyOptions& options) {
  const Scheme& scheme = deployment.scheme();
  const uint64_t files = scheme.num_files();
  const uint64_t servers = scheme.num_servers();
  const uint64_t strategies = scheme.alphabet().size();
  const bool exhaustive = options.mode == VerifyOptions::Mode::kExhaustive;
  const uint64_t total =
      exhaustive ? strategies * servers * files : options.samples;
  if (total > options.max_retrievals) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "%d retrievals exceed the limit of %d", total,
        options.max_retrievals));
  }
  if (!exhaustive && !options.z.empty()) {
    WPIR_RETURN_IF_ERROR(ValidatePmf(options.z, strategies));
  }

  VerifyReport report;
  if (options.count_queries) report.query_counts.resize(servers);
  InProcessTransport transport(deployment);
  auto run = [&](int m, size_t s, int t) {
    absl::StatusOr<RetrievalTranscript> transcript =
        RunRetrieval(deployment, m, s, t, &transport);
    if (!transcript.ok()) {
      report.failures.push_back(
          {m, s, t, std::string(transcript.status().message())});
      ++report.retrievals;
      return;
    }
    if (!exhaustive) transcript->seed = options.seed;
    int d = transcript->downloaded_symbols;
    if (report.retrievals == 0) {
      report.min_downloaded = report.max_downloaded = d;
    } else {
      report.min_downloaded = std::min(report.min_downloaded, d);
      report.max_downloaded = std::max(report.max_downloaded, d);
    }
    ++report.retrievals;
    report.total_downloaded += d;
    report.total_downloaded_squared += static_cast<uint64_t>(d) * d;
    if (!transcript->success) {
      report.failures.push_back({m, s, t, transcript->failure});
    }
    if (options.count_queries) {
      for (uint64_t j = 0; j < servers; ++j) {
        ++report.query_counts[j][transcript->queries[j]];
      }
    }
    if (options.transcript_sink != nullptr) {
      *options.transcript_sink << TranscriptToJsonLine(*transcript);
    }
  };

  if (exhaustive) {
    for (uint64_t m = 1; m <= files; ++m) {
      for (size_t s = 0; s < strategies; ++s) {
        for (uint64_t t = 1; t <= servers; ++t) {
          run(m, s, t);
        }
      }
    }
    return report;
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> pick_file(1, static_cast<int>(files));
  std::uniform_int_distribution<int> pick_shift(1, static_cast<int>(servers));
  std::uniform_int_distribution<size_t> pick_uniform(0, strategies - 1);
  std::discrete_distribution<size_t> pick_weighted(options.z.begin(),
                                                   options.z.end());
  for (uint64_t i = 0; i < options.samples; ++i) {
    int m = pick_file(rng);
    size_t s = options.z.empty() ? pick_uniform(rng) : pick_weighted(rng);
    int t = pick_shift(rng);
    run(m, s, t);
  }
  return report;
}

}  // namespace wpir
