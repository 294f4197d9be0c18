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
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cyberaggr/eval/cross_validation.hpp"
#include "cyberaggr/features/registry.hpp"

namespace cyberaggr::eval {

inline const std::array<std::string, 6>& report_columns() {
  static const std::array<std::string, 6> c = {
      "Prediction target", "Features", "Model", "ACC", "F1", "AUC"};
  return c;
}

/// "Basic + Dynamic", "Content + Emotion", ...
inline std::string features_display(std::span<const features::Block> blocks) {
  std::string out;
  for (auto b : features::canonical_blocks(blocks)) {
    std::string name(features::block_name(b));
    name[0] = static_cast<char>(name[0] - 'a' + 'A');
    if (!out.empty()) out += " + ";
    out += name;
  }
  return out;
}

/// A metric in [0,1] as a percentage with two decimals.
inline std::string percent_cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
  return buf;
}

inline std::array<std::string, 6> report_cells(const EvalReport& r) {
  return {r.target, features_display(r.blocks),
          std::string(models::model_kind_display(r.model)),
          percent_cell(r.acc), percent_cell(r.macro_f1), percent_cell(r.ovr_auc)};
}

/// Fixed-width text table, one row per report in input order.
inline std::string render_text(std::span<const EvalReport> reports) {
  const auto& head = report_columns();
  std::vector<std::array<std::string, 6>> rows;
  for (const auto& r : reports) rows.push_back(report_cells(r));
  std::array<std::size_t, 6> w{};
  for (std::size_t c = 0; c < 6; ++c) {
    w[c] = head[c].size();
    for (const auto& row : rows) w[c] = std::max(w[c], row[c].size());
  }
  auto line = [&](const std::array<std::string, 6>& cells) {
    std::string s;
    for (std::size_t c = 0; c < 6; ++c) {
      if (c) s += "  ";
      // text columns left-aligned, numbers right-aligned
      const std::string pad(w[c] - cells[c].size(), ' ');
      s += c < 3 ? cells[c] + pad : pad + cells[c];
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s + "\n";
  };
  std::string out = line(head);
  std::size_t total = 0;
  for (auto x : w) total += x;
  out += std::string(total + 10, '-') + "\n";
  for (const auto& row : rows) out += line(row);
  return out;
}

inline nlohmann::json report_to_json(const EvalReport& r) {
  const auto cells = report_cells(r);
  nlohmann::json j;
  j["target"] = r.target;
  std::vector<std::string> blocks;
  for (auto b : features::canonical_blocks(r.blocks)) {
    blocks.emplace_back(features::block_name(b));
  }
  j["features"] = blocks;
  j["model"] = std::string(models::model_kind_name(r.model));
  j["acc"] = r.acc;
  j["macro_f1"] = r.macro_f1;
  j["ovr_auc"] = r.ovr_auc;
  nlohmann::json cj;
  for (std::size_t c = 0; c < 6; ++c) cj[report_columns()[c]] = cells[c];
  j["cells"] = cj;
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& f : r.folds) {
    folds.push_back({{"test_rows", f.test_rows},
                     {"acc", f.acc},
                     {"macro_f1", f.macro_f1},
                     {"ovr_auc", f.ovr_auc ? nlohmann::json(*f.ovr_auc) : nlohmann::json()}});
  }
  j["folds"] = folds;
  nlohmann::json pc = nlohmann::json::array();
  for (const auto& c : r.per_class) {
    pc.push_back({{"label", c.label},
                  {"precision", c.precision},
                  {"recall", c.recall},
                  {"f1", c.f1},
                  {"auc", c.auc ? nlohmann::json(*c.auc) : nlohmann::json()}});
  }
  j["per_class"] = pc;
  j["auc_excluded_classes"] = r.auc_excluded_classes;
  j["protocol"] = {{"kind", std::string(protocol_name(r.protocol))},
                   {"k", r.k},
                   {"seed", r.seed},
                   {"n", r.n}};
  return j;
}

inline nlohmann::json render_json(std::span<const EvalReport> reports) {
  nlohmann::json j;
  j["columns"] = report_columns();
  j["rows"] = nlohmann::json::array();
  for (const auto& r : reports) j["rows"].push_back(report_to_json(r));
  return j;
}

}  // namespace cyberaggr::eval
