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
#include <string>
#include <string_view>
#include <vector>

#include "cyberaggr/utf8.hpp"

namespace cyberaggr::features {

inline constexpr std::size_t kMaxTokenChars = 8;

/// Greedy forward maximum matching. Whitespace separates chunks; inside a
/// chunk the longest vocabulary entry (up to max_chars code points) starting
/// at the cursor wins, otherwise a single code point is emitted.
/// `in_vocab(std::string_view utf8_token)` answers membership.
template <typename InVocab>
std::vector<std::string> max_match_tokenize(std::string_view text,
                                            std::size_t max_chars,
                                            InVocab&& in_vocab) {
  std::vector<std::string> tokens;
  const auto decoded = utf8::decode(text);
  if (!decoded) return tokens;
  const std::u32string& cps = *decoded;
  max_chars = std::max<std::size_t>(1, max_chars);
  std::size_t i = 0;
  std::string candidate;
  while (i < cps.size()) {
    if (utf8::is_space(cps[i])) {
      ++i;
      continue;
    }
    std::size_t chunk_end = i;
    while (chunk_end < cps.size() && !utf8::is_space(cps[chunk_end])) {
      ++chunk_end;
    }
    std::size_t take = 1;
    for (std::size_t len = std::min(max_chars, chunk_end - i); len >= 2;
         --len) {
      candidate = utf8::encode(std::u32string_view(cps).substr(i, len));
      if (in_vocab(std::string_view(candidate))) {
        take = len;
        break;
      }
    }
    tokens.push_back(utf8::encode(std::u32string_view(cps).substr(i, take)));
    i += take;
  }
  return tokens;
}

}  // namespace cyberaggr::features
