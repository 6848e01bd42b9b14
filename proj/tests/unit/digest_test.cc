// Copyright 2026 The ragmark Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ragmark/digest.h"

#include <gtest/gtest.h>

#include <string>

#include "oracles.h"
#include "ragmark/rng.h"

namespace ragmark {
namespace {

// The oracle itself is pinned to published vectors first, so agreement
// with the library below means something.
TEST(OracleSha256, FipsVectors) {
  EXPECT_EQ(oracle::Hex(oracle::Sha256(oracle::ToBytes(""))),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(oracle::Hex(oracle::Sha256(oracle::ToBytes("abc"))),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(oracle::Hex(oracle::Sha256(oracle::ToBytes(
                "abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"))),
            "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
  EXPECT_EQ(oracle::Hex(oracle::Sha256(oracle::Bytes(1'000'000, 'a'))),
            "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST(OracleHmacSha256, Rfc4231Vectors) {
  // Test case 1.
  EXPECT_EQ(oracle::Hex(oracle::HmacSha256(oracle::Bytes(20, 0x0b), oracle::ToBytes("Hi There"))),
            "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7");
  // Test case 2.
  EXPECT_EQ(oracle::Hex(oracle::HmacSha256(oracle::ToBytes("Jefe"),
                                           oracle::ToBytes("what do ya want for nothing?"))),
            "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
  // Test case 6: key longer than the block size.
  EXPECT_EQ(oracle::Hex(oracle::HmacSha256(
                oracle::Bytes(131, 0xaa),
                oracle::ToBytes("Test Using Larger Than Block-Size Key - Hash Key First"))),
            "60e431591ee0b67f0d8a26aacbf5b77f8e0bc6213728c5140546040f0ee37f54");
}

TEST(Sha256, MatchesOracleOnRandomInputs) {
  SeededRng rng(17);
  for (int i = 0; i < 200; ++i) {
    std::string s(rng.Below(300), '\0');
    for (auto& c : s) c = static_cast<char>(rng.Below(256));
    EXPECT_EQ(ToHex(Sha256(s)), oracle::Hex(oracle::Sha256(oracle::ToBytes(s))));
  }
}

TEST(HmacSha256, MatchesOracleOnRandomInputs) {
  SeededRng rng(23);
  for (int i = 0; i < 200; ++i) {
    std::string key(1 + rng.Below(100), '\0');
    std::string msg(rng.Below(200), '\0');
    for (auto& c : key) c = static_cast<char>(rng.Below(256));
    for (auto& c : msg) c = static_cast<char>(rng.Below(256));
    EXPECT_EQ(ToHex(HmacSha256(AsBytes(key), msg)),
              oracle::Hex(oracle::HmacSha256(oracle::ToBytes(key), oracle::ToBytes(msg))));
  }
}

TEST(BigEndianMod, MatchesLongDivision) {
  SeededRng rng(29);
  for (int i = 0; i < 500; ++i) {
    Digest256 d;
    for (auto& b : d) b = static_cast<std::uint8_t>(rng.Below(256));
    const auto m = static_cast<std::uint32_t>(1 + rng.Below(100'000));
    oracle::Digest od;
    std::copy(d.begin(), d.end(), od.begin());
    EXPECT_EQ(BigEndianMod(d, m), oracle::ModBigEndian(od, m));
  }
}

TEST(BigEndianMod, ModOneIsZero) {
  EXPECT_EQ(BigEndianMod(Sha256("anything"), 1), 0u);
}

TEST(Hex, RoundTripAndRejects) {
  const std::string hex = "00ff10ab";
  const auto bytes = FromHex(hex);
  ASSERT_TRUE(bytes.has_value());
  EXPECT_EQ(ToHex(*bytes), hex);
  EXPECT_FALSE(FromHex("abc").has_value());
  EXPECT_FALSE(FromHex("zz").has_value());
}

}  // namespace
}  // namespace ragmark
