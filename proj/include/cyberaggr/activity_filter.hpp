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

#pragma once

#include <algorithm>
#include <chrono>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cyberaggr/data_model.hpp"
#include "cyberaggr/errors.hpp"

namespace cyberaggr {

enum class ActiveMonthRule {
  kCalendarMonths,  // posts in N distinct UTC calendar months
  kDaySpan,         // first-to-last post span of at least 30*N days
};

struct ActivityFilterPolicy {
  int min_posts = 20;  // strictly more than this many posts
  int min_active_calendar_months = 2;
  std::chrono::sys_days latest_post_not_before =
      std::chrono::sys_days{std::chrono::year{2020} / 1 / 1};
  ActiveMonthRule month_rule = ActiveMonthRule::kCalendarMonths;

  void validate() const {
    if (min_posts < 0) throw ValidationError("min_posts must be >= 0");
    if (min_active_calendar_months < 1) {
      throw ValidationError("min_active_calendar_months must be >= 1");
    }
  }
};

inline constexpr const char* kReasonPostCount = "post count";
inline constexpr const char* kReasonActiveMonths = "active months";
inline constexpr const char* kReasonLatestPost = "latest post";

struct FilterResult {
  std::vector<UserRecord> kept;
  std::vector<std::pair<std::string, std::string>> dropped;  // (user, reason)
};

// First failing rule, or nullptr when the user is kept.
inline const char* activity_violation(const UserRecord& user,
                                      const ActivityFilterPolicy& policy) {
  using namespace std::chrono;
  const auto& posts = user.posts;
  if (static_cast<long long>(posts.size()) <= policy.min_posts) {
    return kReasonPostCount;
  }
  if (posts.empty()) return kReasonPostCount;
  const auto [first, last] = std::minmax_element(
      posts.begin(), posts.end(), [](const Post& a, const Post& b) {
        return a.timestamp < b.timestamp;
      });
  if (policy.month_rule == ActiveMonthRule::kCalendarMonths) {
    std::set<int> months;
    for (const auto& p : posts) months.insert(month_key(p.timestamp));
    if (static_cast<int>(months.size()) < policy.min_active_calendar_months) {
      return kReasonActiveMonths;
    }
  } else {
    const auto span = last->timestamp - first->timestamp;
    if (span < days{30 * policy.min_active_calendar_months}) {
      return kReasonActiveMonths;
    }
  }
  if (floor<days>(last->timestamp) < policy.latest_post_not_before) {
    return kReasonLatestPost;
  }
  return nullptr;
}

/// Splits users into kept and dropped, each drop tagged with the first rule
/// it fails (post count, then active months, then latest post date).
inline FilterResult apply_activity_filter(const std::vector<UserRecord>& users,
                                          const ActivityFilterPolicy& policy) {
  policy.validate();
  FilterResult out;
  for (const auto& u : users) {
    if (const char* reason = activity_violation(u, policy)) {
      out.dropped.emplace_back(u.id(), reason);
    } else {
      out.kept.push_back(u);
    }
  }
  return out;
}

struct DatasetSummary {
  std::size_t users = 0;
  std::size_t male = 0;
  std::size_t female = 0;
  std::size_t unknown = 0;
  std::size_t total_posts = 0;
  std::size_t min_posts = 0;
  std::size_t max_posts = 0;
  double mean_posts = 0.0;
  double min_span_days = 0.0;
  double max_span_days = 0.0;
  double mean_span_days = 0.0;

  nlohmann::json to_json() const {
    return {{"users", users},
            {"gender", {{"male", male}, {"female", female}, {"unknown", unknown}}},
            {"posts",
             {{"total", total_posts},
              {"min", min_posts},
              {"max", max_posts},
              {"mean", mean_posts}}},
            {"span_days",
             {{"min", min_span_days},
              {"max", max_span_days},
              {"mean", mean_span_days}}}};
  }
};

inline DatasetSummary dataset_summary(const std::vector<UserRecord>& users) {
  DatasetSummary s;
  s.users = users.size();
  if (users.empty()) return s;
  s.min_posts = users.front().posts.size();
  bool first_span = true;
  double span_sum = 0.0;
  for (const auto& u : users) {
    switch (u.profile.gender) {
      case Gender::kMale:
        ++s.male;
        break;
      case Gender::kFemale:
        ++s.female;
        break;
      case Gender::kUnknown:
        ++s.unknown;
        break;
    }
    const std::size_t n = u.posts.size();
    s.total_posts += n;
    s.min_posts = std::min(s.min_posts, n);
    s.max_posts = std::max(s.max_posts, n);
    double span = 0.0;
    if (n > 0) {
      const auto [lo, hi] = std::minmax_element(
          u.posts.begin(), u.posts.end(), [](const Post& a, const Post& b) {
            return a.timestamp < b.timestamp;
          });
      span = static_cast<double>((hi->timestamp - lo->timestamp).count()) /
             86400.0;
    }
    span_sum += span;
    if (first_span) {
      s.min_span_days = s.max_span_days = span;
      first_span = false;
    } else {
      s.min_span_days = std::min(s.min_span_days, span);
      s.max_span_days = std::max(s.max_span_days, span);
    }
  }
  s.mean_posts = static_cast<double>(s.total_posts) / users.size();
  s.mean_span_days = span_sum / users.size();
  return s;
}

}  // namespace cyberaggr
