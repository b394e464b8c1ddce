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

#include <algorithm>

#include "herd/error.hpp"
#include "herd/sim/notification.hpp"

namespace herd::sim {
namespace {

int floor_div(int a, int b) { return (a - ((a % b) + b) % b) / b; }

TEST(Notification, Goldens) {
  EXPECT_EQ(notification_level(0, 0), 0);
  EXPECT_EQ(notification_level(7, 4), 3);
  EXPECT_EQ(notification_level(5, 2), 1);
  EXPECT_EQ(notification_level(4, 0), 0);
  EXPECT_EQ(notification_level(6, 0), 1);
  EXPECT_EQ(notification_level(0, 2), 0);  // floor(-4/2) + 1 clamps at 0
  EXPECT_EQ(notification_level(7, 100), 3);
}

TEST(Notification, RangeAndMonotonicity) {
  for (int a = 0; a <= 7; ++a) {
    for (int b = 0; b <= 40; ++b) {
      const int n = notification_level(a, b);
      ASSERT_GE(n, 0);
      ASSERT_LE(n, 3);
      ASSERT_EQ(n, std::clamp(floor_div(a - 4, 2) + floor_div(b, 2), 0, 3));
      if (a < 7) ASSERT_LE(n, notification_level(a + 1, b));
      ASSERT_LE(n, notification_level(a, b + 1));
    }
  }
}

// The literal reading never drops below 3, so it cannot express "no alert"
// and contradicts the 0-3 tier description; kept for comparison only.
TEST(Notification, LiteralMaxReading) {
  EXPECT_EQ(notification_level_literal_max(0, 0), 3);
  EXPECT_EQ(notification_level_literal_max(7, 4), 3);
  EXPECT_EQ(notification_level_literal_max(7, 10), 6);
  for (int a = 0; a <= 7; ++a) {
    for (int b = 0; b <= 10; ++b) EXPECT_GE(notification_level_literal_max(a, b), 3);
  }
}

TEST(Notification, RejectsOutOfRange) {
  EXPECT_THROW(notification_level(8, 0), InvalidArgument);
  EXPECT_THROW(notification_level(-1, 0), InvalidArgument);
  EXPECT_THROW(notification_level(3, -1), InvalidArgument);
}

}  // namespace
}  // namespace herd::sim
