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
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cyberaggr/timestamp.hpp"
#include "cyberaggr/utf8.hpp"

namespace cyberaggr {

enum class Gender { kMale, kFemale, kUnknown };

inline std::string_view gender_code(Gender g) {
  switch (g) {
    case Gender::kMale:
      return "m";
    case Gender::kFemale:
      return "f";
    case Gender::kUnknown:
      return "";
  }
  return "";
}

struct Post {
  std::string post_id;
  Timestamp timestamp{};
  std::string text;
  bool has_picture = false;
  bool is_retweet = false;
  std::int64_t mention_count = 0;
  std::int64_t hashtag_count = 0;
  std::int64_t url_count = 0;
  std::vector<std::string> emoticon_tokens;

  friend bool operator==(const Post&, const Post&) = default;
};

struct Profile {
  std::string user_id;
  Gender gender = Gender::kUnknown;
  bool verified = false;
  std::int64_t follower_count = 0;
  std::int64_t followee_count = 0;
  std::string description;

  friend bool operator==(const Profile&, const Profile&) = default;
};

/// A user with posts sorted by timestamp ascending.
struct UserRecord {
  Profile profile;
  std::vector<Post> posts;

  const std::string& id() const { return profile.user_id; }

  friend bool operator==(const UserRecord&, const UserRecord&) = default;
};

// Derivation rules used when the input omits the interaction counts.

// "@" followed by at least one non-space character.
inline std::int64_t count_mentions(std::string_view text) {
  auto cps = utf8::decode(text);
  if (!cps) return 0;
  std::int64_t n = 0;
  for (std::size_t i = 0; i + 1 < cps->size(); ++i) {
    if ((*cps)[i] == U'@' && !utf8::is_space((*cps)[i + 1])) ++n;
  }
  return n;
}

// Nonempty text enclosed by a pair of "#".
inline std::int64_t count_hashtags(std::string_view text) {
  std::int64_t n = 0;
  std::size_t pos = 0;
  for (;;) {
    const auto open = text.find('#', pos);
    if (open == std::string_view::npos) break;
    const auto close = text.find('#', open + 1);
    if (close == std::string_view::npos) break;
    if (close > open + 1) {
      ++n;
      pos = close + 1;
    } else {
      // "##": the second mark may open the next tag.
      pos = close;
    }
  }
  return n;
}

inline std::int64_t count_urls(std::string_view text) {
  std::int64_t n = 0;
  for (std::string_view scheme : {"http://", "https://"}) {
    for (auto pos = text.find(scheme); pos != std::string_view::npos;
         pos = text.find(scheme, pos + scheme.size())) {
      ++n;
    }
  }
  return n;
}

// Bracketed emoticon codes such as "[哈哈]": 1 to 8 non-space code points.
inline std::vector<std::string> extract_emoticons(std::string_view text) {
  std::vector<std::string> out;
  auto cps = utf8::decode(text);
  if (!cps) return out;
  std::size_t i = 0;
  while (i < cps->size()) {
    if ((*cps)[i] != U'[') {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < cps->size() && j - i <= 9 && (*cps)[j] != U']' &&
           (*cps)[j] != U'[' && !utf8::is_space((*cps)[j])) {
      ++j;
    }
    if (j < cps->size() && (*cps)[j] == U']' && j > i + 1 && j - i - 1 <= 8) {
      out.push_back(utf8::encode(std::u32string_view(*cps).substr(i, j - i + 1)));
      i = j + 1;
    } else {
      i = j > i + 1 ? j : i + 1;
    }
  }
  return out;
}

inline void sort_posts(std::vector<Post>& posts) {
  std::stable_sort(posts.begin(), posts.end(),
                   [](const Post& a, const Post& b) {
                     return a.timestamp < b.timestamp;
                   });
}

}  // namespace cyberaggr
