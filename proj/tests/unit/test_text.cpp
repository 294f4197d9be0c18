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
#include <atomic>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cyberaggr/csv.hpp"
#include "cyberaggr/data_model.hpp"
#include "cyberaggr/parallel.hpp"
#include "cyberaggr/rng.hpp"
#include "cyberaggr/timestamp.hpp"
#include "cyberaggr/utf8.hpp"

namespace cyberaggr {
namespace {

TEST(Utf8, DecodeEncodeRoundTrip) {
  const std::string s = "a今天😀";
  auto cps = utf8::decode(s);
  ASSERT_TRUE(cps);
  EXPECT_EQ(cps->size(), 4u);
  EXPECT_EQ(utf8::encode(*cps), s);
  EXPECT_EQ(utf8::length(s), 4u);
}

TEST(Utf8, RejectsMalformed) {
  EXPECT_FALSE(utf8::is_valid("\xC3"));
  EXPECT_FALSE(utf8::is_valid("\xC0\xAF"));        // overlong
  EXPECT_FALSE(utf8::is_valid("\xED\xA0\x80"));    // surrogate
  EXPECT_TRUE(utf8::is_valid(""));
}

TEST(Timestamp, ZoneHandling) {
  auto z = parse_timestamp("2020-03-02T10:17:00Z");
  ASSERT_TRUE(z);
  EXPECT_TRUE(z->had_zone);
  EXPECT_EQ(format_timestamp(z->utc), "2020-03-02T10:17:00Z");

  auto naive = parse_timestamp("2020-03-02 18:17");
  ASSERT_TRUE(naive);
  EXPECT_FALSE(naive->had_zone);
  EXPECT_EQ(naive->utc, z->utc);  // read as UTC+8

  auto off = parse_timestamp("2020-03-02T12:17:00+02:00");
  ASSERT_TRUE(off);
  EXPECT_EQ(off->utc, z->utc);
  EXPECT_EQ(parse_timestamp("2020-03-02T12:17:00.250-0100")->utc,
            parse_timestamp("2020-03-02T13:17:00Z")->utc);
}

TEST(Timestamp, RejectsGarbage) {
  for (const char* s : {"", "2020-13-01T00:00Z", "2020-02-30T00:00Z", "2020-01-01",
                        "2020-01-01T25:00Z", "2020-01-01T00:00Zjunk", "yesterday"}) {
    EXPECT_FALSE(parse_timestamp(s)) << s;
  }
}

TEST(Timestamp, CalendarHelpers) {
  const auto t = parse_timestamp("2020-03-02T10:17:00Z")->utc;  // a Monday
  EXPECT_EQ(hour_of_day(t), 10);
  EXPECT_EQ(weekday_index(t), 0);
  EXPECT_EQ(weekday_index(parse_timestamp("2020-03-08T23:59:59Z")->utc), 6);
  EXPECT_NE(month_key(t), month_key(parse_timestamp("2020-04-01T00:00Z")->utc));
  EXPECT_EQ(format_date(*parse_date("2020-02-29")), "2020-02-29");
  EXPECT_FALSE(parse_date("2019-02-29"));
}

TEST(Csv, SplitAndEscape) {
  EXPECT_EQ(csv::split("a,\"b,c\",\"d\"\"e\","),
            (std::vector<std::string>{"a", "b,c", "d\"e", ""}));
  for (std::string f : {"plain", "com,ma", "quo\"te", ""}) {
    EXPECT_EQ(csv::split(csv::escape(f)).front(), f);
  }
  EXPECT_EQ(csv::split("x\ty", '\t').size(), 2u);
}

TEST(Csv, NumbersRoundTrip) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.normal() * std::pow(10.0, rng.uniform(-30, 30));
    EXPECT_EQ(*csv::to_double(csv::format_double(v)), v);
  }
  EXPECT_FALSE(csv::to_double("1.5x"));
  EXPECT_FALSE(csv::to_int("7.0"));
}

TEST(Rng, SameSeedSameStream) {
  Rng a(99), b(99), c(100);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs = differs || x != c.next();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, DistributionsInRange) {
  Rng r(1);
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(r.below(7), 7u);
    const double z = r.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(Rng, ShuffleIsPermutation) {
  Rng r(5);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  auto w = v;
  r.shuffle(std::span(w));
  EXPECT_NE(v, w);
  std::sort(w.begin(), w.end());
  EXPECT_EQ(v, w);
}

TEST(Parallel, EachIndexOnceAndLowestErrorWins) {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  try {
    parallel_for(20, 4, [](std::size_t i) {
      if (i == 3 || i == 11) throw std::runtime_error(std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "3");
  }
}

TEST(TextCounts, MentionsHashtagsUrlsEmoticons) {
  EXPECT_EQ(count_mentions("@a hi @ b @c"), 2);
  EXPECT_EQ(count_hashtags("#话题# and #two#"), 2);
  EXPECT_EQ(count_hashtags("## #x#"), 1);
  EXPECT_EQ(count_urls("see http://a.b and https://c.d"), 2);
  EXPECT_EQ(extract_emoticons("好[哈哈]x[泪][ ][toolongemoticon]"),
            (std::vector<std::string>{"[哈哈]", "[泪]"}));
}

}  // namespace
}  // namespace cyberaggr
