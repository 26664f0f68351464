/* Copyright 2026 The dproute Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <gtest/gtest.h>

#include "dproute/bitvec.hpp"
#include "dproute/errors.hpp"
#include "dproute/rng.hpp"

namespace dproute {
namespace {

TEST(BitVec, StringFormIsHighBitFirst) {
  auto v = BitVec::with_bits(8, {1, 2});
  EXPECT_EQ(v.to_string(), "00000011");
  EXPECT_EQ(v.to_string(4), "0000 0011");
  EXPECT_EQ(BitVec::from_string("0000 0011"), v);
}

TEST(BitVec, TernaryString) {
  BitVec zero(8);
  auto bit = BitVec::with_bits(8, {1});
  EXPECT_EQ(zero.to_ternary_string(bit), "*******0");
  auto out = BitVec::with_bits(8, {1, 5});
  EXPECT_EQ(out.to_ternary_string(out), "***1***1");
}

TEST(BitVec, MatchesAndContains) {
  auto v = BitVec::with_bits(8, {1, 5, 7});
  auto mask = BitVec::with_bits(8, {1, 5});
  EXPECT_TRUE(v.contains_all(mask));
  EXPECT_TRUE(v.matches(mask, mask));
  EXPECT_FALSE(v.matches(BitVec(8), mask));
  EXPECT_TRUE(v.matches(BitVec(8), BitVec(8)));
}

TEST(BitVec, Operators) {
  auto a = BitVec::with_bits(70, {1, 65});
  auto b = BitVec::with_bits(70, {2, 65, 70});
  EXPECT_EQ((a | b).set_bits(), (std::vector<LinkId>{1, 2, 65, 70}));
  EXPECT_EQ((a & b).set_bits(), (std::vector<LinkId>{65}));
  EXPECT_EQ((~a).count(), 68U);
  EXPECT_THROW(a |= BitVec(8), WidthMismatch);
  EXPECT_THROW(a.set(71), UnknownLink);
  EXPECT_THROW(a.test(0), UnknownLink);
}

TEST(BitVec, BytesAndHexRoundTrip) {
  Rng rng(5);
  for (std::size_t width : {1U, 7U, 8U, 63U, 64U, 65U, 252U}) {
    BitVec v(width);
    for (LinkId i = 1; i <= width; ++i) {
      if (rng.below(2)) v.set(i);
    }
    EXPECT_EQ(v.to_bytes().size(), (width + 7) / 8);
    EXPECT_EQ(BitVec::from_bytes(v.to_bytes(), width), v);
    EXPECT_EQ(BitVec::from_hex(v.to_hex(), width), v);
  }
}

TEST(BitVec, ClearAndAny) {
  auto v = BitVec::with_bits(10, {3});
  EXPECT_TRUE(v.any());
  v.clear();
  EXPECT_TRUE(v.none());
  EXPECT_EQ(v.width(), 10U);
}

}  // namespace
}  // namespace dproute
