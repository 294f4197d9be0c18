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
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "cyberaggr/csv.hpp"
#include "cyberaggr/data_model.hpp"
#include "cyberaggr/embedding_io.hpp"
#include "cyberaggr/errors.hpp"
#include "cyberaggr/features/behavior.hpp"
#include "cyberaggr/features/content.hpp"
#include "cyberaggr/features/emotion.hpp"
#include "cyberaggr/features/registry.hpp"
#include "cyberaggr/parallel.hpp"

namespace cyberaggr::features {

/// Sorted, duplicate-free block list in canonical order.
inline std::vector<Block> canonical_blocks(std::span<const Block> blocks) {
  std::set<Block> s(blocks.begin(), blocks.end());
  return {s.begin(), s.end()};
}

inline std::size_t total_width(std::span<const Block> blocks) {
  std::size_t w = 0;
  for (Block b : canonical_blocks(blocks)) w += block_width(b);
  return w;
}

inline std::string blocks_label(std::span<const Block> blocks) {
  std::string out;
  for (Block b : canonical_blocks(blocks)) {
    if (!out.empty()) out += "+";
    out += block_name(b);
  }
  return out;
}

struct FeatureVector {
  std::string user_id;
  std::map<Block, std::vector<double>> blocks;

  bool has(Block b) const { return blocks.contains(b); }

  // Concatenation of the requested blocks in canonical order.
  std::vector<double> concat(std::span<const Block> wanted) const {
    std::vector<double> out;
    for (Block b : canonical_blocks(wanted)) {
      auto it = blocks.find(b);
      if (it == blocks.end()) {
        throw ValidationError("user " + user_id + " has no " +
                              std::string(block_name(b)) + " block");
      }
      out.insert(out.end(), it->second.begin(), it->second.end());
    }
    return out;
  }
};

/// Read-only resources backing the content, emotion and transformer blocks.
struct FeatureResources {
  const WordVectorTable* word_vectors = nullptr;
  const EmotionLexicon* lexicon = nullptr;
  const EmbeddingTable* embeddings = nullptr;
};

inline void check_width(Block b, const std::vector<double>& v,
                        const std::string& user_id) {
  if (v.size() != block_width(b)) {
    throw ValidationError("user " + user_id + ": " + std::string(block_name(b)) +
                          " block has width " + std::to_string(v.size()) +
                          ", expected " + std::to_string(block_width(b)));
  }
}

inline FeatureVector assemble(const UserRecord& user,
                              std::span<const Block> requested,
                              const FeatureResources& res) {
  FeatureVector fv;
  fv.user_id = user.id();
  for (Block b : canonical_blocks(requested)) {
    std::vector<double> v;
    switch (b) {
      case Block::kBasic:
        v = extract_basic(user);
        break;
      case Block::kDynamic:
        v = extract_dynamic(user);
        break;
      case Block::kContent:
        if (!res.word_vectors) {
          throw ValidationError("content block requested without word vectors");
        }
        v = extract_content(user, *res.word_vectors).vector;
        break;
      case Block::kEmotion:
        if (!res.lexicon) {
          throw ValidationError("emotion block requested without a lexicon");
        }
        v = extract_emotion(user, *res.lexicon);
        break;
      case Block::kTransformer: {
        if (!res.embeddings) {
          throw ValidationError(
              "transformer block requested without an embedding table");
        }
        auto e = res.embeddings->find(user.id());
        if (!e) {
          throw ValidationError("missing transformer embedding for user " +
                                user.id());
        }
        v.assign(e->begin(), e->end());
        break;
      }
    }
    check_width(b, v, user.id());
    fv.blocks.emplace(b, std::move(v));
  }
  return fv;
}

/// Assembles every user, in parallel. Users lacking an embedding when the
/// transformer block is requested are collected into one error.
inline std::vector<FeatureVector> assemble_all(
    const std::vector<UserRecord>& users, std::span<const Block> requested,
    const FeatureResources& res, unsigned jobs = 1) {
  const auto blocks = canonical_blocks(requested);
  if (std::find(blocks.begin(), blocks.end(), Block::kTransformer) !=
          blocks.end() &&
      res.embeddings) {
    auto cov = join_embeddings(users, *res.embeddings);
    if (!cov.complete()) {
      std::string ids;
      for (const auto& id : cov.missing) ids += (ids.empty() ? "" : ", ") + id;
      throw ValidationError("missing transformer embeddings for users: " + ids);
    }
  }
  std::vector<FeatureVector> out(users.size());
  parallel_for(users.size(), jobs,
               [&](std::size_t i) { out[i] = assemble(users[i], blocks, res); });
  return out;
}

// Feature CSV: user_id, then the block columns in canonical order.

inline void write_features_csv(const std::vector<FeatureVector>& rows,
                               std::span<const Block> blocks, std::ostream& out) {
  const auto bs = canonical_blocks(blocks);
  out << "user_id";
  for (Block b : bs) {
    for (const auto& c : column_names(b)) out << "," << c;
  }
  out << "\n";
  for (const auto& r : rows) {
    out << csv::escape(r.user_id);
    for (double v : r.concat(bs)) out << "," << csv::format_double(v);
    out << "\n";
  }
}

inline nlohmann::json features_schema(std::span<const Block> blocks) {
  nlohmann::json j;
  j["registry_version"] = std::string(kRegistryVersion);
  j["blocks"] = nlohmann::json::array();
  std::size_t offset = 0;
  for (Block b : canonical_blocks(blocks)) {
    nlohmann::json bj = {{"name", std::string(block_name(b))},
                         {"width", block_width(b)},
                         {"offset", offset}};
    if (b == Block::kBasic) {
      std::vector<std::string> names;
      for (auto n : basic_feature_names()) names.emplace_back(n);
      bj["features"] = names;
    }
    j["blocks"].push_back(std::move(bj));
    offset += block_width(b);
  }
  j["width"] = offset;
  return j;
}

struct FeatureTable {
  std::vector<Block> blocks;
  std::vector<FeatureVector> rows;

  const FeatureVector* find(const std::string& user_id) const {
    for (const auto& r : rows) {
      if (r.user_id == user_id) return &r;
    }
    return nullptr;
  }
};

/// Reads a feature CSV; the block set is recovered from the header, which
/// must match the canonical column names exactly.
inline FeatureTable read_features_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("feature CSV is empty");
  const auto header = csv::split(csv::trim_cr(line));
  if (header.empty() || header[0] != "user_id") {
    throw DataError("feature CSV must start with a user_id column");
  }
  FeatureTable table;
  std::size_t col = 1;
  for (Block b : kAllBlocks) {
    const auto names = column_names(b);
    if (col < header.size() && header[col] == names.front()) {
      for (std::size_t k = 0; k < names.size(); ++k) {
        if (col + k >= header.size() || header[col + k] != names[k]) {
          throw DataError("feature CSV header: malformed " +
                          std::string(block_name(b)) + " block");
        }
      }
      table.blocks.push_back(b);
      col += names.size();
    }
  }
  if (col != header.size()) {
    throw DataError("feature CSV header: unrecognized column \"" + header[col] +
                    "\"");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto trimmed = csv::trim_cr(line);
    if (trimmed.empty()) continue;
    const auto f = csv::split(trimmed);
    if (f.size() != header.size()) {
      throw DataError("feature CSV line " + std::to_string(lineno) +
                      ": expected " + std::to_string(header.size()) + " fields");
    }
    FeatureVector fv;
    fv.user_id = f[0];
    std::size_t c = 1;
    for (Block b : table.blocks) {
      std::vector<double> v(block_width(b));
      for (auto& x : v) {
        auto d = csv::to_double(f[c]);
        if (!d) {
          throw DataError("feature CSV line " + std::to_string(lineno) +
                          ": bad number in column " + header[c]);
        }
        x = *d;
        ++c;
      }
      fv.blocks.emplace(b, std::move(v));
    }
    table.rows.push_back(std::move(fv));
  }
  return table;
}

}  // namespace cyberaggr::features
