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

#include <random>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace wpir {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

std::string Bytes(std::initializer_list<int> values) {
  std::string out;
  for (int v : values) out.push_back(static_cast<char>(v));
  return out;
}

TEST(QueryFrameTest, WireLayout) {
  QueryFrame f;
  f.kind = SchemeKind::kOlr;
  f.server = 3;
  f.query = ParseQueryMatrix("2 0/0 1").value();
  std::string wire = SerializeQueryFrame(f).value();
  EXPECT_EQ(wire, Bytes({0, 0, 0, 7, 1, 2, 3, 2, 0, 0, 1}));
  EXPECT_EQ(ParseQueryFrame(wire, 2, 2).value(), f);
}

TEST(QueryFrameTest, RandomRoundTrip) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    int rows = 1 + rng() % 4;
    int cols = 1 + rng() % 5;
    QueryFrame f;
    f.kind = static_cast<SchemeKind>(rng() % 3);
    f.server = 1 + rng() % 255;
    f.query = QueryMatrix(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) f.query.set(r, c, rng() % 256);
    }
    std::string wire = SerializeQueryFrame(f).value();
    ASSERT_EQ(wire.size(), kLengthPrefixBytes + 3 + rows * cols);
    EXPECT_EQ(ParseQueryFrame(wire, rows, cols).value(), f);
    // Every strict prefix is rejected.
    for (size_t cut = 0; cut < wire.size(); ++cut) {
      EXPECT_FALSE(ParseQueryFrame(wire.substr(0, cut), rows, cols).ok());
    }
  }
}

TEST(QueryFrameTest, RejectsMalformedInput) {
  QueryFrame f;
  f.server = 1;
  f.query = ParseQueryMatrix("0 1/1 0").value();
  std::string wire = SerializeQueryFrame(f).value();
  absl::StatusOr<QueryFrame> wrong_shape = ParseQueryFrame(wire, 2, 3);
  ASSERT_FALSE(wrong_shape.ok());
  EXPECT_THAT(wrong_shape.status().message(), HasSubstr("malformed"));

  std::string bad_version = wire;
  bad_version[4] = 9;
  EXPECT_FALSE(ParseQueryFrame(bad_version, 2, 2).ok());
  std::string bad_kind = wire;
  bad_kind[5] = 3;
  EXPECT_FALSE(ParseQueryFrame(bad_kind, 2, 2).ok());
  std::string trailing = wire + "x";
  EXPECT_FALSE(ParseQueryFrame(trailing, 2, 2).ok());

  f.server = 0;
  EXPECT_FALSE(SerializeQueryFrame(f).ok());
  f.server = 256;
  EXPECT_FALSE(SerializeQueryFrame(f).ok());
}

TEST(AnswerFrameTest, WireLayout) {
  AnswerFrame a{2, {0x1234, 7}};
  std::string wire = SerializeAnswerFrame(a).value();
  EXPECT_EQ(wire, Bytes({0, 0, 0, 6, 2, 2, 0x12, 0x34, 0, 7}));
  EXPECT_EQ(ParseAnswerFrame(wire).value(), a);

  AnswerFrame empty{3, {}};
  std::string empty_wire = SerializeAnswerFrame(empty).value();
  EXPECT_EQ(empty_wire, Bytes({0, 0, 0, 2, 3, 0}));
  EXPECT_EQ(ParseAnswerFrame(empty_wire).value(), empty);
}

TEST(AnswerFrameTest, RandomRoundTripAndTruncation) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    AnswerFrame a;
    a.server = 1 + rng() % 255;
    a.symbols.resize(rng() % 6);
    for (uint32_t& s : a.symbols) s = rng() % kMaxWireModulus;
    std::string wire = SerializeAnswerFrame(a).value();
    EXPECT_EQ(ParseAnswerFrame(wire).value(), a);
    for (size_t cut = 0; cut < wire.size(); ++cut) {
      EXPECT_FALSE(ParseAnswerFrame(wire.substr(0, cut)).ok());
    }
  }
}

TEST(AnswerFrameTest, RejectsInconsistentLength) {
  // l = 2 but a single symbol follows; the prefix is self-consistent.
  EXPECT_FALSE(ParseAnswerFrame(Bytes({0, 0, 0, 4, 1, 2, 0, 1})).ok());
  EXPECT_FALSE(SerializeAnswerFrame(AnswerFrame{1, {kMaxWireModulus}}).ok());
  EXPECT_FALSE(SerializeAnswerFrame(AnswerFrame{0, {}}).ok());
}

TEST(SplitMessagesTest, SplitsConcatenatedFrames) {
  std::string a = SerializeAnswerFrame(AnswerFrame{1, {5}}).value();
  std::string b = SerializeAnswerFrame(AnswerFrame{2, {}}).value();
  std::string stream = a + b;
  std::vector<absl::string_view> parts = SplitMessages(stream).value();
  EXPECT_THAT(parts, ElementsAre(absl::string_view(a), absl::string_view(b)));
  EXPECT_FALSE(SplitMessages(stream.substr(0, stream.size() - 1)).ok());
  EXPECT_FALSE(SplitMessages(stream.substr(0, a.size() + 2)).ok());
  EXPECT_TRUE(SplitMessages("").value().empty());
}

}  // namespace
}  // namespace wpir
