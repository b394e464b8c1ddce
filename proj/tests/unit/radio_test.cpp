// Copyright (c) 2026 The Herd Authors. All Rights Reserved.
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

#include <gtest/gtest.h>

#include "herd/error.hpp"
#include "herd/sim/radio.hpp"

namespace herd::sim {
namespace {

TEST(Radio, RangeBoundaryIsInclusive) {
  RadioChannel ch(200.0);
  EXPECT_EQ(ch.deliver({0, 0}, {200, 0}), Delivery::kDelivered);
  EXPECT_EQ(ch.deliver({0, 0}, {120, 160}), Delivery::kDelivered);
  EXPECT_EQ(ch.deliver({0, 0}, {200.001, 0}), Delivery::kOutOfRange);
  EXPECT_EQ(ch.deliver({0, 0}, {500, 0}), Delivery::kOutOfRange);
  EXPECT_DOUBLE_EQ(distance({0, 0}, {3, 4}), 5.0);
}

TEST(Radio, DropRateAndDeterminism) {
  RadioChannel a(100.0, 0.3, 5), b(100.0, 0.3, 5);
  int dropped = 0;
  for (int i = 0; i < 20000; ++i) {
    const auto d = a.deliver({0, 0}, {10, 0});
    ASSERT_EQ(d, b.deliver({0, 0}, {10, 0}));
    dropped += d == Delivery::kDropped;
  }
  EXPECT_NEAR(dropped / 20000.0, 0.3, 0.015);
}

TEST(Radio, OutOfRangeDoesNotConsumeRandomness) {
  RadioChannel a(100.0, 0.5, 9), b(100.0, 0.5, 9);
  for (int i = 0; i < 50; ++i) a.deliver({0, 0}, {1000, 0});
  for (int i = 0; i < 200; ++i) ASSERT_EQ(a.deliver({0, 0}, {1, 0}), b.deliver({0, 0}, {1, 0}));
}

TEST(Radio, RejectsBadParameters) {
  EXPECT_THROW(RadioChannel(-1.0), InvalidArgument);
  EXPECT_THROW(RadioChannel(10.0, 1.5), InvalidArgument);
  RadioChannel always(10.0, 1.0, 0);
  EXPECT_EQ(always.deliver({0, 0}, {1, 1}), Delivery::kDropped);
}

}  // namespace
}  // namespace herd::sim
