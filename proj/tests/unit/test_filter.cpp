/*
 * Copyright 2026 The cyberaggr Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cyberaggr/activity_filter.hpp"
#include "fixtures.hpp"

namespace cyberaggr {
namespace {

using testing::daily_posts;
using testing::make_user;

std::string only_reason(const FilterResult& r) {
  return r.dropped.size() == 1 ? r.dropped[0].second : "";
}

TEST(ActivityFilter, KeepsTwentyOnePostsOverTwoMonths) {
  const auto r = apply_activity_filter({make_user("u", daily_posts(21, "2020-03-20"))}, {});
  EXPECT_EQ(r.kept.size(), 1u);
  EXPECT_TRUE(r.dropped.empty());
}

TEST(ActivityFilter, ExactlyTwentyPostsIsTooFew) {
  const auto r = apply_activity_filter({make_user("u", daily_posts(20, "2020-03-20"))}, {});
  EXPECT_TRUE(r.kept.empty());
  EXPECT_EQ(only_reason(r), kReasonPostCount);
}

TEST(ActivityFilter, OneCalendarMonthIsTooNarrow) {
  std::vector<Post> posts;
  for (int i = 0; i < 50; ++i) {
    char ts[32];
    std::snprintf(ts, sizeof ts, "2020-03-%02dT%02d:00:00Z", 1 + i % 30, i % 24);
    posts.push_back(testing::make_post("p" + std::to_string(i), ts));
  }
  const auto r = apply_activity_filter({make_user("u", posts)}, {});
  EXPECT_EQ(only_reason(r), kReasonActiveMonths);
}

TEST(ActivityFilter, StaleUsersDropped) {
  const auto r = apply_activity_filter({make_user("u", daily_posts(40, "2019-10-01"))}, {});
  EXPECT_EQ(only_reason(r), kReasonLatestPost);
}

TEST(ActivityFilter, DaySpanRule) {
  ActivityFilterPolicy p;
  p.month_rule = ActiveMonthRule::kDaySpan;
  // 21 days across two calendar months: enough months, too short a span.
  EXPECT_EQ(only_reason(apply_activity_filter(
                {make_user("u", daily_posts(21, "2020-03-20"))}, p)),
            kReasonActiveMonths);
  EXPECT_EQ(apply_activity_filter({make_user("u", daily_posts(61, "2020-03-01"))}, p)
                .kept.size(),
            1u);
}

TEST(ActivityFilter, RejectsBadPolicy) {
  ActivityFilterPolicy p;
  p.min_posts = -1;
  EXPECT_THROW(apply_activity_filter({}, p), ValidationError);
  p = {};
  p.min_active_calendar_months = 0;
  EXPECT_THROW(apply_activity_filter({}, p), ValidationError);
}

TEST(ActivityFilter, PartitionAndIdempotence) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<UserRecord> users;
    const int n = 1 + static_cast<int>(rng.below(30));
    for (int i = 0; i < n; ++i) {
      users.push_back(testing::random_user(rng, "u" + std::to_string(i), 60));
    }
    const auto r = apply_activity_filter(users, {});
    ASSERT_EQ(r.kept.size() + r.dropped.size(), users.size());
    std::set<std::string> ids;
    for (const auto& u : r.kept) ids.insert(u.id());
    for (const auto& [id, reason] : r.dropped) ids.insert(id);
    EXPECT_EQ(ids.size(), users.size());

    const auto again = apply_activity_filter(r.kept, {});
    EXPECT_EQ(again.kept, r.kept);
    EXPECT_TRUE(again.dropped.empty());
  }
}

TEST(DatasetSummary, Empty) {
  const auto s = dataset_summary({});
  EXPECT_EQ(s.users, 0u);
  EXPECT_EQ(s.total_posts, 0u);
  EXPECT_EQ(s.mean_posts, 0.0);
  EXPECT_EQ(s.max_span_days, 0.0);
}

TEST(DatasetSummary, TalliesGender) {
  const auto s = dataset_summary({make_user("a", daily_posts(3, "2020-01-01"), Gender::kMale),
                                  make_user("b", daily_posts(5, "2020-01-01"), Gender::kUnknown)});
  EXPECT_EQ(s.male, 1u);
  EXPECT_EQ(s.unknown, 1u);
  EXPECT_EQ(s.female, 0u);
  EXPECT_EQ(s.total_posts, 8u);
  EXPECT_EQ(s.min_posts, 3u);
  EXPECT_EQ(s.max_posts, 5u);
  EXPECT_EQ(s.to_json()["gender"]["male"], 1);
}

}  // namespace
}  // namespace cyberaggr
