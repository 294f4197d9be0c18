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
#include <istream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cyberaggr/csv.hpp"
#include "cyberaggr/data_model.hpp"
#include "cyberaggr/errors.hpp"
#include "cyberaggr/features/registry.hpp"
#include "cyberaggr/features/tokenizer.hpp"

namespace cyberaggr::features {

// Declaration order doubles as the tie-break priority.
enum class Emotion { kAnger, kDisgust, kHappiness, kSadness, kFear };

inline std::optional<Emotion> parse_emotion(std::string_view s) {
  for (std::size_t i = 0; i < kEmotionNames.size(); ++i) {
    if (s == kEmotionNames[i]) return static_cast<Emotion>(i);
  }
  return std::nullopt;
}

class EmotionLexicon {
 public:
  // Adding a token twice with different emotions is a DataError.
  void add(std::string token, Emotion e) {
    if (token.empty()) throw DataError("empty lexicon token");
    const std::size_t chars = utf8::length(token);
    auto [it, inserted] = map_.emplace(std::move(token), e);
    if (!inserted && it->second != e) {
      throw DataError("lexicon token \"" + it->first +
                      "\" maps to more than one emotion");
    }
    max_chars_ = std::max(max_chars_, chars);
  }

  std::optional<Emotion> find(std::string_view token) const {
    auto it = map_.find(std::string(token));
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  std::size_t max_token_chars() const { return max_chars_; }

 private:
  std::unordered_map<std::string, Emotion> map_;
  std::size_t max_chars_ = 0;
};

/// CSV "token,emotion" with an optional "token,emotion" header line.
inline EmotionLexicon load_emotion_lexicon(std::istream& in) {
  EmotionLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto trimmed = csv::trim_cr(line);
    if (trimmed.empty()) continue;
    if (lineno == 1 && trimmed == "token,emotion") continue;
    const auto f = csv::split(trimmed);
    if (f.size() != 2) {
      throw DataError("lexicon line " + std::to_string(lineno) +
                      ": expected token,emotion");
    }
    auto e = parse_emotion(f[1]);
    if (!e) {
      throw DataError("lexicon line " + std::to_string(lineno) +
                      ": unknown emotion \"" + f[1] + "\"");
    }
    lex.add(f[0], *e);
  }
  if (in.bad()) throw DataError("lexicon read failure");
  return lex;
}

/// Most-hit emotion of a text, nullopt when no lexicon token occurs.
inline std::optional<Emotion> classify_text(std::string_view text,
                                            const EmotionLexicon& lex) {
  if (lex.empty()) return std::nullopt;
  std::array<int, 5> hits{};
  const auto tokens = max_match_tokenize(
      text, lex.max_token_chars(),
      [&](std::string_view t) { return lex.find(t).has_value(); });
  for (const auto& t : tokens) {
    if (auto e = lex.find(t)) ++hits[static_cast<std::size_t>(*e)];
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < hits.size(); ++i) {
    if (hits[i] > hits[best]) best = i;
  }
  if (hits[best] == 0) return std::nullopt;
  return static_cast<Emotion>(best);
}

/// Share of all posts classified as each of the five emotions.
inline std::vector<double> extract_emotion(const UserRecord& user,
                                           const EmotionLexicon& lex) {
  std::vector<double> f(kEmotionWidth, 0.0);
  if (user.posts.empty()) return f;
  for (const auto& p : user.posts) {
    if (auto e = classify_text(p.text, lex)) f[static_cast<std::size_t>(*e)] += 1;
  }
  for (auto& x : f) x /= static_cast<double>(user.posts.size());
  return f;
}

}  // namespace cyberaggr::features
