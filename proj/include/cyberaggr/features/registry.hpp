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

#include <array>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "cyberaggr/errors.hpp"

namespace cyberaggr::features {

/// Bumped whenever a block's layout or any feature definition changes.
inline constexpr std::string_view kRegistryVersion = "1";

/// Feature blocks in canonical concatenation order.
enum class Block { kBasic, kDynamic, kContent, kEmotion, kTransformer };

inline constexpr std::array<Block, 5> kAllBlocks = {
    Block::kBasic, Block::kDynamic, Block::kContent, Block::kEmotion,
    Block::kTransformer};

inline constexpr std::size_t kBasicWidth = 41;
inline constexpr std::size_t kDynamicWidth = 93;
inline constexpr std::size_t kContentWidth = 300;
inline constexpr std::size_t kEmotionWidth = 5;
inline constexpr std::size_t kTransformerWidth = 512;

inline constexpr std::size_t block_width(Block b) {
  switch (b) {
    case Block::kBasic:
      return kBasicWidth;
    case Block::kDynamic:
      return kDynamicWidth;
    case Block::kContent:
      return kContentWidth;
    case Block::kEmotion:
      return kEmotionWidth;
    case Block::kTransformer:
      return kTransformerWidth;
  }
  return 0;
}

inline constexpr std::string_view block_name(Block b) {
  switch (b) {
    case Block::kBasic:
      return "basic";
    case Block::kDynamic:
      return "dynamic";
    case Block::kContent:
      return "content";
    case Block::kEmotion:
      return "emotion";
    case Block::kTransformer:
      return "transformer";
  }
  return "";
}

inline Block parse_block(std::string_view s) {
  for (Block b : kAllBlocks) {
    if (s == block_name(b)) return b;
  }
  throw ValidationError("unknown feature block \"" + std::string(s) + "\"");
}

// Human-readable names of the 41 basic features, in extraction order.
inline const std::array<std::string_view, kBasicWidth>& basic_feature_names() {
  static const std::array<std::string_view, kBasicWidth> names = {
      // profile
      "gender_code", "verified", "log1p_followers", "log1p_followees",
      "log_follow_ratio", "description_length", "has_description",
      "log1p_post_count",
      // tempo
      "span_days", "posts_per_day", "active_days", "active_day_proportion",
      "longest_gap_days", "mean_gap_hours", "sd_gap_hours", "max_posts_per_day",
      "mean_posts_per_active_day",
      // composition
      "original_proportion", "retweet_proportion", "picture_posts",
      "picture_proportion", "mention_proportion", "mentions_per_post",
      "hashtag_proportion", "hashtags_per_post", "url_proportion",
      "emoticon_proportion",
      // text form
      "text_length_mean", "text_length_sd", "text_length_max",
      "text_length_min", "punctuation_per_post", "question_proportion",
      "exclamation_proportion",
      // diurnal summary
      "night_proportion", "morning_proportion", "afternoon_proportion",
      "evening_proportion", "weekend_proportion", "hour_entropy",
      "weekday_entropy"};
  return names;
}

inline constexpr std::array<std::string_view, 3> kInteractionNames = {
    "post", "mention", "retweet"};
inline constexpr std::array<std::string_view, 7> kWeekdayNames = {
    "mon", "tue", "wed", "thu", "fri", "sat", "sun"};
inline constexpr std::array<std::string_view, 5> kEmotionNames = {
    "anger", "disgust", "happiness", "sadness", "fear"};

/// CSV column names for a block, e.g. basic_00, dyn_post_h07, content_042.
inline std::vector<std::string> column_names(Block b) {
  std::vector<std::string> out;
  char buf[64];
  switch (b) {
    case Block::kBasic:
      for (std::size_t i = 0; i < kBasicWidth; ++i) {
        std::snprintf(buf, sizeof buf, "basic_%02zu", i);
        out.emplace_back(buf);
      }
      break;
    case Block::kDynamic:
      for (auto kind : kInteractionNames) {
        for (int h = 0; h < 24; ++h) {
          std::snprintf(buf, sizeof buf, "dyn_%s_h%02d",
                        std::string(kind).c_str(), h);
          out.emplace_back(buf);
        }
        for (auto wd : kWeekdayNames) {
          out.push_back("dyn_" + std::string(kind) + "_" + std::string(wd));
        }
      }
      break;
    case Block::kContent:
      for (std::size_t i = 0; i < kContentWidth; ++i) {
        std::snprintf(buf, sizeof buf, "content_%03zu", i);
        out.emplace_back(buf);
      }
      break;
    case Block::kEmotion:
      for (auto e : kEmotionNames) out.push_back("emo_" + std::string(e));
      break;
    case Block::kTransformer:
      for (std::size_t i = 0; i < kTransformerWidth; ++i) {
        std::snprintf(buf, sizeof buf, "tf_%03zu", i);
        out.emplace_back(buf);
      }
      break;
  }
  return out;
}

}  // namespace cyberaggr::features
