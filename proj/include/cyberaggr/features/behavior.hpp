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
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "cyberaggr/data_model.hpp"
#include "cyberaggr/features/registry.hpp"
#include "cyberaggr/utf8.hpp"

namespace cyberaggr::features {

/// Inclusive number of UTC calendar days from the first to the last post,
/// at least 1.
inline double span_days(const UserRecord& user) {
  if (user.posts.empty()) return 1.0;
  std::int64_t lo = day_index(user.posts.front().timestamp);
  std::int64_t hi = lo;
  for (const auto& p : user.posts) {
    lo = std::min(lo, day_index(p.timestamp));
    hi = std::max(hi, day_index(p.timestamp));
  }
  return std::max<double>(1.0, static_cast<double>(hi - lo + 1));
}

namespace detail {

// Shannon entropy (nats) of a count histogram.
template <std::size_t N>
double entropy(const std::array<double, N>& counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) {
      const double p = c / total;
      h -= p * std::log(p);
    }
  }
  return h;
}

inline void mean_sd(const std::vector<double>& xs, double& mean, double& sd) {
  mean = 0.0;
  sd = 0.0;
  if (xs.empty()) return;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  sd = std::sqrt(ss / static_cast<double>(xs.size()));
}

}  // namespace detail

/// The 41 basic features (profile, tempo, composition, text form, diurnal
/// summary); names in basic_feature_names(). Every value depends only on the
/// multiset of posts, never on their order.
inline std::vector<double> extract_basic(const UserRecord& user) {
  std::vector<double> f;
  f.reserve(kBasicWidth);
  const Profile& pr = user.profile;
  const auto& posts = user.posts;
  const double n = static_cast<double>(posts.size());
  auto frac = [n](double count) { return n > 0 ? count / n : 0.0; };

  // Profile.
  f.push_back(pr.gender == Gender::kMale     ? 0.0
              : pr.gender == Gender::kFemale ? 1.0
                                             : 0.5);
  f.push_back(pr.verified ? 1.0 : 0.0);
  const double followers = static_cast<double>(pr.follower_count);
  const double followees = static_cast<double>(pr.followee_count);
  f.push_back(std::log1p(followers));
  f.push_back(std::log1p(followees));
  f.push_back(std::log((followers + 1.0) / (followees + 1.0)));
  f.push_back(static_cast<double>(utf8::length(pr.description)));
  f.push_back(pr.description.empty() ? 0.0 : 1.0);
  f.push_back(std::log1p(n));

  // Tempo.
  std::vector<Timestamp> times;
  times.reserve(posts.size());
  for (const auto& p : posts) times.push_back(p.timestamp);
  std::sort(times.begin(), times.end());
  const double days_inclusive = span_days(user);
  std::map<std::int64_t, int> per_day;
  for (auto t : times) ++per_day[day_index(t)];
  std::vector<double> gaps_hours;
  double longest_gap_days = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double secs = static_cast<double>((times[i] - times[i - 1]).count());
    gaps_hours.push_back(secs / 3600.0);
    longest_gap_days = std::max(longest_gap_days, secs / 86400.0);
  }
  double gap_mean, gap_sd;
  detail::mean_sd(gaps_hours, gap_mean, gap_sd);
  int max_per_day = 0;
  for (const auto& [d, c] : per_day) max_per_day = std::max(max_per_day, c);
  const double active_days = static_cast<double>(per_day.size());
  f.push_back(times.empty()
                  ? 0.0
                  : static_cast<double>((times.back() - times.front()).count()) /
                        86400.0);
  f.push_back(n / days_inclusive);
  f.push_back(active_days);
  f.push_back(times.empty() ? 0.0 : active_days / days_inclusive);
  f.push_back(longest_gap_days);
  f.push_back(gap_mean);
  f.push_back(gap_sd);
  f.push_back(static_cast<double>(max_per_day));
  f.push_back(active_days > 0 ? n / active_days : 0.0);

  // Composition.
  double retweets = 0, pictures = 0, with_mentions = 0, mentions = 0,
         with_hashtags = 0, hashtags = 0, with_urls = 0, with_emoticons = 0;
  // Text form.
  std::vector<double> lengths;
  lengths.reserve(posts.size());
  double punctuation = 0, with_question = 0, with_exclamation = 0;
  // Diurnal.
  std::array<double, 24> hour_hist{};
  std::array<double, 7> weekday_hist{};

  for (const auto& p : posts) {
    retweets += p.is_retweet;
    pictures += p.has_picture;
    with_mentions += p.mention_count > 0;
    mentions += static_cast<double>(p.mention_count);
    with_hashtags += p.hashtag_count > 0;
    hashtags += static_cast<double>(p.hashtag_count);
    with_urls += p.url_count > 0;
    with_emoticons += !p.emoticon_tokens.empty();

    const auto cps = utf8::decode(p.text).value_or(std::u32string{});
    lengths.push_back(static_cast<double>(cps.size()));
    bool q = false, e = false;
    for (char32_t c : cps) {
      punctuation += utf8::is_punct(c);
      q = q || c == U'?' || c == 0xFF1F;
      e = e || c == U'!' || c == 0xFF01;
    }
    with_question += q;
    with_exclamation += e;

    hour_hist[hour_of_day(p.timestamp)] += 1;
    weekday_hist[weekday_index(p.timestamp)] += 1;
  }

  f.push_back(n > 0 ? frac(n - retweets) : 0.0);
  f.push_back(frac(retweets));
  f.push_back(pictures);
  f.push_back(frac(pictures));
  f.push_back(frac(with_mentions));
  f.push_back(frac(mentions));
  f.push_back(frac(with_hashtags));
  f.push_back(frac(hashtags));
  f.push_back(frac(with_urls));
  f.push_back(frac(with_emoticons));

  // Sorted so the SD does not depend on input post order.
  std::sort(lengths.begin(), lengths.end());
  double len_mean, len_sd;
  detail::mean_sd(lengths, len_mean, len_sd);
  f.push_back(len_mean);
  f.push_back(len_sd);
  f.push_back(lengths.empty() ? 0.0
                              : *std::max_element(lengths.begin(), lengths.end()));
  f.push_back(lengths.empty() ? 0.0
                              : *std::min_element(lengths.begin(), lengths.end()));
  f.push_back(frac(punctuation));
  f.push_back(frac(with_question));
  f.push_back(frac(with_exclamation));

  for (int q = 0; q < 4; ++q) {
    double c = 0;
    for (int h = 6 * q; h < 6 * q + 6; ++h) c += hour_hist[h];
    f.push_back(frac(c));
  }
  f.push_back(frac(weekday_hist[5] + weekday_hist[6]));
  f.push_back(detail::entropy(hour_hist));
  f.push_back(detail::entropy(weekday_hist));
  return f;
}

/// Hour-of-day and day-of-week average occurrence rates for posting,
/// mentioning and retweeting: 3 x (24 hourly rates + 7 weekday rates).
/// Hourly slots are divided by the inclusive day span, weekday slots by the
/// span in weeks.
inline std::vector<double> extract_dynamic(const UserRecord& user) {
  std::array<std::array<double, 31>, 3> counts{};
  for (const auto& p : user.posts) {
    const int h = hour_of_day(p.timestamp);
    const int wd = weekday_index(p.timestamp);
    const std::array<bool, 3> hit = {true, p.mention_count > 0, p.is_retweet};
    for (int k = 0; k < 3; ++k) {
      if (!hit[k]) continue;
      counts[k][h] += 1;
      counts[k][24 + wd] += 1;
    }
  }
  const double days = span_days(user);
  const double weeks = days / 7.0;
  std::vector<double> f;
  f.reserve(kDynamicWidth);
  for (int k = 0; k < 3; ++k) {
    for (int h = 0; h < 24; ++h) f.push_back(counts[k][h] / days);
    for (int d = 0; d < 7; ++d) f.push_back(counts[k][24 + d] / weeks);
  }
  return f;
}

}  // namespace cyberaggr::features
