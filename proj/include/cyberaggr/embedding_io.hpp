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

#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cyberaggr/csv.hpp"
#include "cyberaggr/data_model.hpp"
#include "cyberaggr/errors.hpp"

namespace cyberaggr {

inline constexpr std::size_t kEmbeddingDim = 512;

/// User-level transformer embeddings produced by an external exporter.
///
/// File layout (TSV):
///   #dim=512<TAB>model=<tag>
///   <user_id><TAB>v1<TAB>...<TAB>v512
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::size_t dim, std::string provenance)
      : dim_(dim), provenance_(std::move(provenance)) {}

  std::size_t dimension() const { return dim_; }
  const std::string& provenance() const { return provenance_; }
  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }

  void add(std::string user_id, std::span<const double> vec) {
    if (vec.size() != dim_) {
      throw ValidationError("embedding for " + user_id + " has width " +
                            std::to_string(vec.size()) + ", expected " +
                            std::to_string(dim_));
    }
    if (index_.contains(user_id)) {
      throw ValidationError("duplicate embedding user_id " + user_id);
    }
    index_.emplace(user_id, ids_.size());
    ids_.push_back(std::move(user_id));
    data_.insert(data_.end(), vec.begin(), vec.end());
  }

  std::optional<std::span<const double>> find(const std::string& user_id) const {
    auto it = index_.find(user_id);
    if (it == index_.end()) return std::nullopt;
    return std::span<const double>(data_.data() + it->second * dim_, dim_);
  }

 private:
  std::size_t dim_ = 0;
  std::string provenance_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
};

inline EmbeddingTable load_embeddings(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("embedding file is empty");
  const auto header = csv::split(csv::trim_cr(line), '\t');
  std::optional<long long> dim;
  std::string model;
  bool has_model = false;
  for (const auto& field : header) {
    if (field.starts_with("#dim=")) {
      dim = csv::to_int(std::string_view(field).substr(5));
    } else if (field.starts_with("model=")) {
      model = field.substr(6);
      has_model = true;
    }
  }
  if (header.empty() || !header[0].starts_with("#dim=") || !dim || *dim <= 0 ||
      !has_model) {
    throw DataError("embedding file line 1: expected \"#dim=<n>\\tmodel=<tag>\"");
  }
  EmbeddingTable table(static_cast<std::size_t>(*dim), model);
  std::size_t lineno = 1;
  std::vector<double> vec;
  while (std::getline(in, line)) {
    ++lineno;
    const auto trimmed = csv::trim_cr(line);
    if (trimmed.empty()) continue;
    const auto f = csv::split(trimmed, '\t');
    if (f.size() != table.dimension() + 1) {
      throw DataError("embedding file line " + std::to_string(lineno) +
                      ": expected " + std::to_string(table.dimension()) +
                      " values, got " + std::to_string(f.size() - 1));
    }
    if (f[0].empty()) {
      throw DataError("embedding file line " + std::to_string(lineno) +
                      ": empty user_id");
    }
    vec.clear();
    for (std::size_t k = 1; k < f.size(); ++k) {
      auto v = csv::to_double(f[k]);
      if (!v) {
        throw DataError("embedding file line " + std::to_string(lineno) +
                        ": bad number \"" + f[k] + "\"");
      }
      vec.push_back(*v);
    }
    try {
      table.add(f[0], vec);
    } catch (const ValidationError& e) {
      throw DataError("embedding file line " + std::to_string(lineno) + ": " +
                      e.what());
    }
  }
  if (in.bad()) throw DataError("embedding file read failure");
  return table;
}

inline void write_embeddings(const EmbeddingTable& table, std::ostream& out) {
  out << "#dim=" << table.dimension() << "\tmodel=" << table.provenance()
      << "\n";
  for (const auto& id : table.ids()) {
    out << id;
    const auto row = *table.find(id);
    for (double v : row) out << "\t" << csv::format_double(v);
    out << "\n";
  }
}

struct EmbeddingCoverage {
  std::vector<std::string> missing;  // users without an embedding
  std::vector<std::string> unused;   // embeddings for unknown users

  bool complete() const { return missing.empty(); }
};

inline EmbeddingCoverage join_embeddings(const std::vector<UserRecord>& users,
                                         const EmbeddingTable& table) {
  EmbeddingCoverage cov;
  std::unordered_set<std::string> known;
  for (const auto& u : users) {
    known.insert(u.id());
    if (!table.find(u.id())) cov.missing.push_back(u.id());
  }
  for (const auto& id : table.ids()) {
    if (!known.contains(id)) cov.unused.push_back(id);
  }
  return cov;
}

}  // namespace cyberaggr
