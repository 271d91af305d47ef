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

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <tuple>
#include <vector>

#include "absl/status/status.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace wpir {
namespace {

PrimeField Field(uint32_t q) { return PrimeField::Create(q).value(); }

TEST(EffectiveParamsTest, KnownValues) {
  EXPECT_EQ(EffectiveParams::Compute(3, 2).value(),
            (EffectiveParams{3, 2, 1, 1}));
  EXPECT_EQ(EffectiveParams::Compute(4, 2).value(),
            (EffectiveParams{2, 1, 1, 1}));
  EXPECT_EQ(EffectiveParams::Compute(5, 3).value(),
            (EffectiveParams{5, 3, 2, 2}));
  EXPECT_EQ(EffectiveParams::Compute(6, 4).value(),
            (EffectiveParams{3, 2, 1, 1}));
}

TEST(EffectiveParamsTest, RejectsNoRedundancy) {
  EXPECT_FALSE(EffectiveParams::Compute(2, 2).ok());
  EXPECT_FALSE(EffectiveParams::Compute(2, 3).ok());
  EXPECT_FALSE(EffectiveParams::Compute(3, 0).ok());
}

TEST(EffectiveParamsTest, ReducedPairIsCoprime) {
  for (int n = 2; n <= 30; ++n) {
    for (int k = 1; k < n; ++k) {
      EffectiveParams p = EffectiveParams::Compute(n, k).value();
      EXPECT_EQ(std::gcd(p.n, p.k), 1);
      EXPECT_GE(p.r, 1);
      EXPECT_EQ(p.lambda, p.n - p.k);
      EXPECT_EQ(p.n * k, n * p.k);
    }
  }
}

TEST(FileSetTest, RandomIsDeterministicInTheSeed) {
  PrimeField f = Field(5);
  FileSet a = FileSet::Random(f, 3, 2, 3, 42);
  FileSet b = FileSet::Random(f, 3, 2, 3, 42);
  FileSet c = FileSet::Random(f, 3, 2, 3, 43);
  EXPECT_EQ(a.ToText(), b.ToText());
  EXPECT_NE(a.ToText(), c.ToText());
}

TEST(FileSetTest, TextRoundTrip) {
  PrimeField f = Field(7);
  FileSet a = FileSet::Random(f, 3, 2, 3, 9);
  FileSet b = FileSet::ParseText(a.ToText(), f, 2, 3).value();
  ASSERT_EQ(b.num_files(), 3);
  for (int m = 1; m <= 3; ++m) EXPECT_EQ(a.file(m), b.file(m));
}

TEST(FileSetTest, ParseTextSkipsComments) {
  PrimeField f = Field(3);
  FileSet s = FileSet::ParseText("# two files\n1 2\n\n# second\n0 1\n", f, 1, 2)
                  .value();
  ASSERT_EQ(s.num_files(), 2);
  EXPECT_EQ(s.file(1).at(0, 1), 2u);
  EXPECT_EQ(s.file(2).at(0, 0), 0u);
}

TEST(FileSetTest, ParseTextRejectsBadInput) {
  PrimeField f = Field(3);
  EXPECT_FALSE(FileSet::ParseText("1 3\n", f, 1, 2).ok());
  EXPECT_FALSE(FileSet::ParseText("1 -1\n", f, 1, 2).ok());
  EXPECT_FALSE(FileSet::ParseText("1 x\n", f, 1, 2).ok());
  EXPECT_FALSE(FileSet::ParseText("1 2 0\n", f, 1, 2).ok());
  EXPECT_FALSE(FileSet::ParseText("1 2\n0 0\n", f, 1, 2).ok());
}

TEST(FileSetTest, CreateChecksFieldAndShape) {
  PrimeField f = Field(3);
  std::vector<FieldMatrix> wrong_field = {FieldMatrix(Field(5), 1, 2)};
  EXPECT_FALSE(FileSet::Create(f, 1, 2, wrong_field).ok());
  std::vector<FieldMatrix> wrong_shape = {FieldMatrix(f, 2, 2)};
  EXPECT_FALSE(FileSet::Create(f, 1, 2, wrong_shape).ok());
}

struct Instance {
  int servers;
  int dim;
  int files;
  uint32_t q;
};

class EncodedStorageTest : public ::testing::TestWithParam<Instance> {};

TEST_P(EncodedStorageTest, LayoutAndCodewordInvariants) {
  const Instance& in = GetParam();
  PrimeField f = Field(in.q);
  MdsCode code = MdsCode::ReedSolomon(in.servers, in.dim, f).value();
  EffectiveParams p = EffectiveParams::Compute(in.servers, in.dim).value();
  FileSet files = FileSet::Random(f, in.files, p.lambda, in.dim, 3);
  EncodedStorage st = EncodedStorage::Encode(files, code).value();
  ASSERT_EQ(st.num_servers(), in.servers);
  ASSERT_EQ(st.params(), p);

  for (int j = 1; j <= in.servers; ++j) {
    const ServerColumn& x = st.column(j);
    EXPECT_EQ(x.height(), static_cast<size_t>(in.files * p.n));
    for (int m = 1; m <= in.files; ++m) {
      for (int row = p.lambda; row < p.n; ++row) EXPECT_EQ(x.at(m, row), 0u);
    }
  }
  for (int m = 1; m <= in.files; ++m) {
    for (int i = 0; i < p.lambda; ++i) {
      std::vector<uint32_t> stored;
      for (int j = 1; j <= in.servers; ++j) stored.push_back(st.column(j).at(m, i));
      EXPECT_EQ(code.Encode(files.file(m).row(i)).value(), stored);
      // The last K servers alone recover the row.
      std::vector<size_t> last(in.dim);
      std::iota(last.begin(), last.end(), in.servers - in.dim);
      std::vector<uint32_t> tail(stored.end() - in.dim, stored.end());
      std::vector<uint32_t> row(files.file(m).row(i).begin(),
                                files.file(m).row(i).end());
      EXPECT_EQ(ErasureDecode(code, last, tail).value(), row);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Instances, EncodedStorageTest,
                         ::testing::Values(Instance{3, 2, 2, 3},
                                           Instance{3, 2, 4, 3},
                                           Instance{5, 3, 2, 5},
                                           Instance{4, 2, 3, 5},
                                           Instance{6, 4, 2, 7}));

TEST(EncodedStorageTest, ZeroFilesGiveZeroColumns) {
  PrimeField f = Field(3);
  MdsCode code = MdsCode::ReedSolomon(3, 2, f).value();
  EncodedStorage st = EncodedStorage::Encode(FileSet::Zero(f, 2, 1, 2), code)
                          .value();
  for (int j = 1; j <= 3; ++j) {
    ServerColumn x = st.Column(j).value();
    EXPECT_TRUE(std::all_of(x.symbols().begin(), x.symbols().end(),
                            [](uint32_t v) { return v == 0; }));
  }
}

TEST(EncodedStorageTest, ColumnIndexOutOfRange) {
  PrimeField f = Field(3);
  MdsCode code = MdsCode::ReedSolomon(3, 2, f).value();
  EncodedStorage st = EncodedStorage::Encode(FileSet::Zero(f, 2, 1, 2), code)
                          .value();
  EXPECT_EQ(st.Column(0).status().code(), absl::StatusCode::kOutOfRange);
  EXPECT_EQ(st.Column(4).status().code(), absl::StatusCode::kOutOfRange);
}

TEST(EncodedStorageTest, RejectsMismatchedFiles) {
  PrimeField f = Field(5);
  MdsCode code = MdsCode::ReedSolomon(5, 3, f).value();
  EXPECT_FALSE(EncodedStorage::Encode(FileSet::Zero(f, 2, 1, 3), code).ok());
  EXPECT_FALSE(EncodedStorage::Encode(FileSet::Zero(f, 2, 2, 2), code).ok());
  EXPECT_FALSE(
      EncodedStorage::Encode(FileSet::Zero(Field(7), 2, 2, 3), code).ok());
}

}  // namespace
}  // namespace wpir
