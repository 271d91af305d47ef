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

#include "wpir/protocol.h"

#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace wpir {
namespace {

void PutU32(std::string& out, uint32_t v) {
  out.push_back(static_cast<char>(v >> 24));
  out.push_back(static_cast<char>(v >> 16));
  out.push_back(static_cast<char>(v >> 8));
  out.push_back(static_cast<char>(v));
}

uint8_t Byte(absl::string_view s, size_t i) {
  return static_cast<uint8_t>(s[i]);
}

uint32_t GetU32(absl::string_view s) {
  return uint32_t{Byte(s, 0)} << 24 | uint32_t{Byte(s, 1)} << 16 |
         uint32_t{Byte(s, 2)} << 8 | uint32_t{Byte(s, 3)};
}

std::string WithPrefix(const std::string& payload) {
  std::string out;
  out.reserve(kLengthPrefixBytes + payload.size());
  PutU32(out, static_cast<uint32_t>(payload.size()));
  out += payload;
  return out;
}

// Checks the prefix against the message size and returns the payload.
absl::StatusOr<absl::string_view> Payload(absl::string_view message) {
  if (message.size() < kLengthPrefixBytes) {
    return absl::InvalidArgumentError("malformed frame: truncated length");
  }
  uint32_t length = GetU32(message);
  if (message.size() - kLengthPrefixBytes != length) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "malformed frame: prefix says %d payload bytes, got %d", length,
        message.size() - kLengthPrefixBytes));
  }
  return message.substr(kLengthPrefixBytes);
}

}  // namespace

absl::StatusOr<std::string> SerializeQueryFrame(const QueryFrame& frame) {
  if (frame.server < 1 || frame.server > 255) {
    return absl::InvalidArgumentError(
        absl::StrFormat("server index %d does not fit a byte", frame.server));
  }
  std::string payload;
  payload.push_back(static_cast<char>(frame.version));
  payload.push_back(static_cast<char>(frame.kind));
  payload.push_back(static_cast<char>(frame.server));
  for (int r = 0; r < frame.query.rows(); ++r) {
    for (int c = 0; c < frame.query.cols(); ++c) {
      payload.push_back(static_cast<char>(frame.query.at(r, c)));
    }
  }
  return WithPrefix(payload);
}

absl::StatusOr<QueryFrame> ParseQueryFrame(absl::string_view message,
                                           int rows, int cols) {
  absl::StatusOr<absl::string_view> payload = Payload(message);
  if (!payload.ok()) return payload.status();
  const size_t expected = 3 + static_cast<size_t>(rows) * cols;
  if (payload->size() != expected) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "malformed query frame: %d payload bytes, expected %d",
        payload->size(), expected));
  }
  QueryFrame frame;
  frame.version = Byte(*payload, 0);
  if (frame.version != kProtocolVersion) {
    return absl::InvalidArgumentError(
        absl::StrFormat("unsupported protocol version %d", frame.version));
  }
  uint8_t kind = Byte(*payload, 1);
  if (kind > static_cast<uint8_t>(SchemeKind::kOlr)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("unknown scheme kind %d", kind));
  }
  frame.kind = static_cast<SchemeKind>(kind);
  frame.server = Byte(*payload, 2);
  frame.query = QueryMatrix(rows, cols);
  size_t pos = 3;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) frame.query.set(r, c, Byte(*payload, pos++));
  }
  return frame;
}

absl::StatusOr<std::string> SerializeAnswerFrame(const AnswerFrame& frame) {
  if (frame.server < 1 || frame.server > 255) {
    return absl::InvalidArgumentError(
        absl::StrFormat("server index %d does not fit a byte", frame.server));
  }
  if (frame.symbols.size() > 255) {
    return absl::InvalidArgumentError("more than 255 sub-responses");
  }
  std::string payload;
  payload.push_back(static_cast<char>(frame.server));
  payload.push_back(static_cast<char>(frame.symbols.size()));
  for (uint32_t symbol : frame.symbols) {
    if (symbol >= kMaxWireModulus) {
      return absl::InvalidArgumentError(
          absl::StrFormat("symbol %d does not fit 16 bits", symbol));
    }
    payload.push_back(static_cast<char>(symbol >> 8));
    payload.push_back(static_cast<char>(symbol));
  }
  return WithPrefix(payload);
}

absl::StatusOr<AnswerFrame> ParseAnswerFrame(absl::string_view message) {
  absl::StatusOr<absl::string_view> payload = Payload(message);
  if (!payload.ok()) return payload.status();
  if (payload->size() < 2) {
    return absl::InvalidArgumentError("malformed answer frame: no header");
  }
  AnswerFrame frame;
  frame.server = Byte(*payload, 0);
  size_t count = Byte(*payload, 1);
  if (payload->size() != 2 + 2 * count) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "malformed answer frame: l=%d needs %d payload bytes, got %d", count,
        2 + 2 * count, payload->size()));
  }
  frame.symbols.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    frame.symbols.push_back(uint32_t{Byte(*payload, 2 + 2 * i)} << 8 |
                            Byte(*payload, 3 + 2 * i));
  }
  return frame;
}

absl::StatusOr<std::vector<absl::string_view>> SplitMessages(
    absl::string_view stream) {
  std::vector<absl::string_view> out;
  while (!stream.empty()) {
    if (stream.size() < kLengthPrefixBytes) {
      return absl::InvalidArgumentError("stream ends inside a length prefix");
    }
    size_t total = kLengthPrefixBytes + GetU32(stream);
    if (stream.size() < total) {
      return absl::InvalidArgumentError("stream ends inside a payload");
    }
    out.push_back(stream.substr(0, total));
    stream.remove_prefix(total);
  }
  return out;
}

}  // namespace wpir
