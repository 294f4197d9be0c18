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
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "cyberaggr/csv.hpp"
#include "cyberaggr/data_model.hpp"
#include "cyberaggr/errors.hpp"
#include "cyberaggr/features/tokenizer.hpp"

namespace cyberaggr::features {

/// Pretrained word vectors, token -> dense vector of a fixed dimension.
class WordVectorTable {
 public:
  WordVectorTable() = default;
  explicit WordVectorTable(std::size_t dimension) : dim_(dimension) {}

  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return index_.size(); }
  bool empty() const { return index_.empty(); }
  std::size_t max_token_chars() const { return max_chars_; }

  // Returns false (and keeps the existing entry) on a duplicate token.
  bool add(std::string token, std::span<const double> vec) {
    if (vec.size() != dim_) {
      throw ValidationError("word vector width " + std::to_string(vec.size()) +
                            " != table dimension " + std::to_string(dim_));
    }
    const std::size_t chars = utf8::length(token);
    auto [it, inserted] = index_.emplace(std::move(token), size());
    if (!inserted) return false;
    data_.insert(data_.end(), vec.begin(), vec.end());
    max_chars_ = std::max(max_chars_, chars);
    return true;
  }

  const double* find(std::string_view token) const {
    auto it = index_.find(std::string(token));
    return it == index_.end() ? nullptr : data_.data() + it->second * dim_;
  }

  bool contains(std::string_view token) const { return find(token) != nullptr; }

 private:
  std::size_t dim_ = 0;
  std::size_t max_chars_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
};

/// Reads "token v1 ... vD" lines. A first line of exactly two integers is
/// taken as the "count dim" header. Malformed rows are DataErrors naming the
/// line. Duplicate tokens keep their first vector.
inline WordVectorTable load_word_vectors(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t dim = 0;
  WordVectorTable table;
  bool first = true;
  std::vector<double> vec;
  while (std::getline(in, line)) {
    ++lineno;
    const auto trimmed = csv::trim_cr(line);
    if (trimmed.find_first_not_of(' ') == std::string_view::npos) continue;
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (pos < trimmed.size()) {
      const auto next = trimmed.find(' ', pos);
      const auto end = next == std::string_view::npos ? trimmed.size() : next;
      if (end > pos) parts.push_back(trimmed.substr(pos, end - pos));
      pos = end + 1;
    }
    if (first) {
      first = false;
      if (parts.size() == 2 && csv::to_int(parts[0]) && csv::to_int(parts[1])) {
        dim = static_cast<std::size_t>(*csv::to_int(parts[1]));
        table = WordVectorTable(dim);
        continue;
      }
      dim = parts.size() - 1;
      table = WordVectorTable(dim);
    }
    if (parts.size() != dim + 1 || dim == 0) {
      throw DataError("word vectors line " + std::to_string(lineno) +
                      ": expected token and " + std::to_string(dim) + " values");
    }
    vec.clear();
    for (std::size_t k = 1; k < parts.size(); ++k) {
      auto v = csv::to_double(parts[k]);
      if (!v) {
        throw DataError("word vectors line " + std::to_string(lineno) +
                        ": bad number \"" + std::string(parts[k]) + "\"");
      }
      vec.push_back(*v);
    }
    table.add(std::string(parts[0]), vec);
  }
  if (in.bad()) throw DataError("word vectors read failure");
  return table;
}

struct OovStats {
  std::size_t documents = 0;
  std::size_t oov_documents = 0;  // no token found in the table
  std::size_t tokens = 0;
  std::size_t hit_tokens = 0;
};

struct ContentResult {
  std::vector<double> vector;
  OovStats oov;
};

/// Posts in a canonical order so order-sensitive float sums are
/// reproducible under any permutation of the input.
inline std::vector<const Post*> canonical_posts(const UserRecord& user) {
  std::vector<const Post*> out;
  out.reserve(user.posts.size());
  for (const auto& p : user.posts) out.push_back(&p);
  std::sort(out.begin(), out.end(), [](const Post* a, const Post* b) {
    if (a->timestamp != b->timestamp) return a->timestamp < b->timestamp;
    if (a->post_id != b->post_id) return a->post_id < b->post_id;
    return a->text < b->text;
  });
  return out;
}

/// Two-level average: each document is the mean of its in-vocabulary token
/// vectors (zero when nothing hits), the user is the mean of document
/// vectors. A nonempty profile description counts as one more document.
inline ContentResult extract_content(const UserRecord& user,
                                     const WordVectorTable& table) {
  if (table.empty()) {
    throw ValidationError("word vector table is empty");
  }
  const std::size_t dim = table.dimension();
  const std::size_t max_chars = std::min(kMaxTokenChars, table.max_token_chars());
  ContentResult out;
  out.vector.assign(dim, 0.0);
  std::vector<double> doc(dim);

  // Running means keep the result exact when every vector is identical.
  auto add_document = [&](std::string_view text) {
    const auto tokens = max_match_tokenize(
        text, max_chars, [&](std::string_view t) { return table.contains(t); });
    std::fill(doc.begin(), doc.end(), 0.0);
    std::size_t hits = 0;
    for (const auto& t : tokens) {
      if (const double* v = table.find(t)) {
        ++hits;
        const double w = 1.0 / static_cast<double>(hits);
        for (std::size_t k = 0; k < dim; ++k) doc[k] += (v[k] - doc[k]) * w;
      }
    }
    ++out.oov.documents;
    out.oov.tokens += tokens.size();
    out.oov.hit_tokens += hits;
    if (hits == 0) ++out.oov.oov_documents;
    const double w = 1.0 / static_cast<double>(out.oov.documents);
    for (std::size_t k = 0; k < dim; ++k) {
      out.vector[k] += (doc[k] - out.vector[k]) * w;
    }
  };

  for (const Post* p : canonical_posts(user)) add_document(p->text);
  if (!user.profile.description.empty()) add_document(user.profile.description);
  return out;
}

}  // namespace cyberaggr::features
