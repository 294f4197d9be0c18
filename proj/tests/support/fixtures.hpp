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

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <unistd.h>

#include "cyberaggr/data_model.hpp"
#include "cyberaggr/rng.hpp"
#include "cyberaggr/timestamp.hpp"

namespace cyberaggr::testing {

// Timestamps are written with an explicit zone; "2020-03-02T10:17:00Z" etc.
inline Timestamp ts(std::string_view s) {
  auto p = parse_timestamp(s);
  if (!p) throw std::invalid_argument("bad fixture timestamp " + std::string(s));
  return p->utc;
}

inline Post make_post(std::string id, std::string_view when, std::string text = "x",
                      bool picture = false, bool retweet = false, int mentions = 0) {
  Post p;
  p.post_id = std::move(id);
  p.timestamp = ts(when);
  p.text = std::move(text);
  p.has_picture = picture;
  p.is_retweet = retweet;
  p.mention_count = mentions;
  return p;
}

inline UserRecord make_user(std::string id, std::vector<Post> posts = {},
                            Gender g = Gender::kFemale) {
  UserRecord u;
  u.profile.user_id = std::move(id);
  u.profile.gender = g;
  u.posts = std::move(posts);
  sort_posts(u.posts);
  return u;
}

// n posts, one per day from `first_day` at 12:00 UTC.
inline std::vector<Post> daily_posts(int n, std::string_view first_day) {
  const auto d0 = *parse_date(first_day);
  std::vector<Post> out;
  for (int i = 0; i < n; ++i) {
    Post p;
    p.post_id = "p" + std::to_string(i);
    p.timestamp = Timestamp(d0 + std::chrono::days{i}) + std::chrono::hours{12};
    p.text = "post";
    out.push_back(std::move(p));
  }
  return out;
}

// Random user with 1..max_posts posts over 2019-2020.
inline UserRecord random_user(Rng& rng, const std::string& id, int max_posts = 40) {
  static const char* kTexts[] = {"hello world", "今天天气很好！", "@a @b look #tag#",
                                 "http://x.y z", "[哈哈] 好", "why?", ""};
  const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_posts)));
  const auto base = Timestamp(*parse_date("2019-06-01"));
  std::vector<Post> posts;
  for (int i = 0; i < n; ++i) {
    Post p;
    p.post_id = id + "_" + std::to_string(i);
    p.timestamp = base + std::chrono::seconds{static_cast<long long>(rng.below(400LL * 86400))};
    p.text = kTexts[rng.below(7)];
    p.has_picture = rng.bernoulli(0.3);
    p.is_retweet = rng.bernoulli(0.3);
    p.mention_count = count_mentions(p.text);
    p.hashtag_count = count_hashtags(p.text);
    p.url_count = count_urls(p.text);
    p.emoticon_tokens = extract_emoticons(p.text);
    posts.push_back(std::move(p));
  }
  UserRecord u = make_user(id, std::move(posts),
                           static_cast<Gender>(rng.below(3)));
  u.profile.follower_count = static_cast<std::int64_t>(rng.below(5000));
  u.profile.followee_count = static_cast<std::int64_t>(rng.below(800));
  u.profile.verified = rng.bernoulli(0.1);
  u.profile.description = rng.bernoulli(0.5) ? "描述 text" : "";
  return u;
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("cyberaggr_" + std::string(tag) + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace cyberaggr::testing
