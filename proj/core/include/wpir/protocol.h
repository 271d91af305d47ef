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

// Wire format. Every message is a 4-byte big-endian payload length followed
// by the payload.
//
//   query payload:  [version:1][kind:1][server:1][rows*cols bytes, row-major]
//   answer payload: [server:1][l:1][l x 2-byte big-endian symbols]

#ifndef WPIR_PROTOCOL_H_
#define WPIR_PROTOCOL_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "wpir/schemes.h"

namespace wpir {

inline constexpr uint8_t kProtocolVersion = 1;
inline constexpr size_t kLengthPrefixBytes = 4;
// Answer symbols travel as 16-bit words.
inline constexpr uint32_t kMaxWireModulus = 1u << 16;

struct QueryFrame {
  uint8_t version = kProtocolVersion;
  SchemeKind kind = SchemeKind::kZyqt;
  int server = 0;  // j in [1:N]
  QueryMatrix query;

  friend bool operator==(const QueryFrame&, const QueryFrame&) = default;
};

struct AnswerFrame {
  int server = 0;
  // The transmitted sub-responses, l = symbols.size().
  std::vector<uint32_t> symbols;

  friend bool operator==(const AnswerFrame&, const AnswerFrame&) = default;
};

absl::StatusOr<std::string> SerializeQueryFrame(const QueryFrame& frame);
// The payload does not carry the query shape, so the receiver supplies it.
absl::StatusOr<QueryFrame> ParseQueryFrame(absl::string_view message,
                                           int rows, int cols);

absl::StatusOr<std::string> SerializeAnswerFrame(const AnswerFrame& frame);
absl::StatusOr<AnswerFrame> ParseAnswerFrame(absl::string_view message);

// Splits a byte stream of concatenated messages. Fails on a truncated tail.
absl::StatusOr<std::vector<absl::string_view>> SplitMessages(
    absl::string_view stream);

}  // namespace wpir

#endif  // WPIR_PROTOCOL_H_
