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

// Run configuration: one JSON document. Unknown keys are rejected so a
// misspelt override fails loudly instead of being ignored.

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cyberaggr/activity_filter.hpp"
#include "cyberaggr/errors.hpp"
#include "cyberaggr/eval/cross_validation.hpp"
#include "cyberaggr/features/registry.hpp"
#include "cyberaggr/label.hpp"
#include "cyberaggr/models/classifier.hpp"
#include "cyberaggr/synth.hpp"
#include "cyberaggr/timestamp.hpp"

namespace cyberaggr::pipeline {

using nlohmann::json;

inline json default_config() {
  return json::parse(R"({
    "seed": 42,
    "jobs": 0,
    "paths": {
      "posts": "",
      "profiles": "",
      "survey": "",
      "word_vectors": "",
      "lexicon": "",
      "embeddings": "",
      "output_dir": "out"
    },
    "ingest": {"naive_utc_offset_minutes": 480},
    "filter": {
      "min_posts": 20,
      "min_active_months": 2,
      "latest_post_not_before": "2020-01-01",
      "month_rule": "calendar"
    },
    "features": {"blocks": ["basic", "dynamic"]},
    "model": {
      "type": "lr",
      "C": 1.0,
      "gamma": null,
      "nn": {
        "learning_rate": 0.001,
        "epochs": 200,
        "batch_size": 32,
        "validation_fraction": 0.1,
        "patience": 20
      }
    },
    "eval": {
      "protocol": "kfold",
      "k": 5,
      "targets": ["social_exclusion", "malicious_humour", "guilt_induction"],
      "grid": [],
      "n_shuffles": 0
    },
    "synth": {
      "users": 320,
      "behavior_signal": 0.5,
      "content_signal": 0.0,
      "transformer_signal": 0.0
    }
  })");
}

/// Parses the right-hand side of --set: JSON if it parses, else a string.
inline json parse_override_value(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return std::string(text);
  }
}

/// Applies "a.b.c=value". The path must already exist in the document.
inline void apply_override(json& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ValidationError("--set expects key.path=value, got \"" +
                          std::string(assignment) + "\"");
  }
  const std::string path(assignment.substr(0, eq));
  json* node = &cfg;
  std::size_t pos = 0;
  while (true) {
    const auto dot = path.find('.', pos);
    const std::string key = path.substr(pos, dot - pos);
    if (!node->is_object() || !node->contains(key)) {
      throw ValidationError("unknown config key \"" + path + "\"");
    }
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  *node = parse_override_value(assignment.substr(eq + 1));
}

/// Overlays `user` on `base`, key by key; unknown keys are errors.
inline void merge_config(json& base, const json& user, const std::string& prefix = "") {
  if (!user.is_object()) throw ValidationError("config must be a JSON object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!base.contains(it.key())) {
      throw ValidationError("unknown config key \"" + path + "\"");
    }
    auto& slot = base[it.key()];
    if (slot.is_object() && it.value().is_object() && it.key() != "nn") {
      merge_config(slot, it.value(), path);
    } else if (slot.is_object() && it.value().is_object()) {
      for (auto jt = it.value().begin(); jt != it.value().end(); ++jt) {
        if (!slot.contains(jt.key())) {
          throw ValidationError("unknown config key \"" + path + "." + jt.key() + "\"");
        }
        slot[jt.key()] = jt.value();
      }
    } else {
      slot = it.value();
    }
  }
}

inline json load_config_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ValidationError("cannot open config " + p.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config " + p.string() + " is not valid JSON: " + e.what());
  }
}

/// One evaluated row: a feature set and a model type.
struct GridRow {
  std::vector<features::Block> blocks;
  models::ModelKind model = models::ModelKind::kLR;
};

/// Typed view of the configuration, produced by validate_config.
struct RunConfig {
  json raw;
  std::uint64_t seed = 42;
  unsigned jobs = 1;
  std::filesystem::path posts, profiles, survey, word_vectors, lexicon,
      embeddings, output_dir;
  std::chrono::minutes naive_offset{480};
  ActivityFilterPolicy filter;
  std::vector<features::Block> blocks;
  models::ModelSpec model;
  eval::Protocol protocol = eval::Protocol::kStratifiedKFold;
  int k = 5;
  std::vector<Target> targets;
  std::vector<GridRow> grid;
  int n_shuffles = 0;
  synth::SynthOptions synth;
};

namespace detail {

template <typename T>
T get(const json& j, const char* section, const char* key) {
  try {
    return j.at(section).at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("config ") + section + "." + key +
                          " has the wrong type");
  }
}

inline std::vector<features::Block> parse_blocks(const json& arr, const std::string& where) {
  if (!arr.is_array() || arr.empty()) {
    throw ValidationError(where + " must be a non-empty list of block names");
  }
  std::vector<features::Block> out;
  for (const auto& b : arr) {
    if (!b.is_string()) throw ValidationError(where + " entries must be strings");
    out.push_back(features::parse_block(b.get<std::string>()));
  }
  return features::canonical_blocks(out);
}

}  // namespace detail

inline RunConfig validate_config(const json& cfg) {
  RunConfig rc;
  rc.raw = cfg;
  try {
    rc.seed = cfg.at("seed").get<std::uint64_t>();
    const int jobs = cfg.at("jobs").get<int>();
    if (jobs < 0) throw ValidationError("jobs must be >= 0 (0 = all cores)");
    rc.jobs = jobs == 0 ? default_jobs() : static_cast<unsigned>(jobs);
  } catch (const json::exception&) {
    throw ValidationError("config seed/jobs must be non-negative integers");
  }
  const auto path = [&](const char* key) {
    return std::filesystem::path(detail::get<std::string>(cfg, "paths", key));
  };
  rc.posts = path("posts");
  rc.profiles = path("profiles");
  rc.survey = path("survey");
  rc.word_vectors = path("word_vectors");
  rc.lexicon = path("lexicon");
  rc.embeddings = path("embeddings");
  rc.output_dir = path("output_dir");
  if (rc.output_dir.empty()) throw ValidationError("paths.output_dir is empty");
  rc.naive_offset = std::chrono::minutes(
      detail::get<int>(cfg, "ingest", "naive_utc_offset_minutes"));

  rc.filter.min_posts = detail::get<int>(cfg, "filter", "min_posts");
  rc.filter.min_active_calendar_months =
      detail::get<int>(cfg, "filter", "min_active_months");
  const auto date = detail::get<std::string>(cfg, "filter", "latest_post_not_before");
  const auto d = parse_date(date);
  if (!d) throw ValidationError("filter.latest_post_not_before must be YYYY-MM-DD");
  rc.filter.latest_post_not_before = *d;
  const auto rule = detail::get<std::string>(cfg, "filter", "month_rule");
  if (rule == "calendar") {
    rc.filter.month_rule = ActiveMonthRule::kCalendarMonths;
  } else if (rule == "day_span") {
    rc.filter.month_rule = ActiveMonthRule::kDaySpan;
  } else {
    throw ValidationError("filter.month_rule must be \"calendar\" or \"day_span\"");
  }
  rc.filter.validate();

  rc.blocks = detail::parse_blocks(cfg.at("features").at("blocks"), "features.blocks");

  const auto& m = cfg.at("model");
  rc.model.kind = models::parse_model_kind(detail::get<std::string>(cfg, "model", "type"));
  rc.model.C = detail::get<double>(cfg, "model", "C");
  if (!m.at("gamma").is_null()) rc.model.gamma = detail::get<double>(cfg, "model", "gamma");
  const auto& nn = m.at("nn");
  try {
    rc.model.nn.learning_rate = nn.at("learning_rate").get<double>();
    rc.model.nn.epochs = nn.at("epochs").get<int>();
    rc.model.nn.batch_size = nn.at("batch_size").get<int>();
    rc.model.nn.validation_fraction = nn.at("validation_fraction").get<double>();
    rc.model.nn.patience = nn.at("patience").get<int>();
  } catch (const json::exception&) {
    throw ValidationError("config model.nn has a missing or mistyped field");
  }
  rc.model.nn.seed = rc.seed;

  const auto protocol = detail::get<std::string>(cfg, "eval", "protocol");
  if (protocol == "kfold") {
    rc.protocol = eval::Protocol::kStratifiedKFold;
  } else if (protocol == "holdout") {
    rc.protocol = eval::Protocol::kHoldout;
  } else {
    throw ValidationError("eval.protocol must be \"kfold\" or \"holdout\"");
  }
  rc.k = detail::get<int>(cfg, "eval", "k");
  if (rc.k < 2) throw ValidationError("eval.k must be >= 2");
  for (const auto& t : cfg.at("eval").at("targets")) {
    if (!t.is_string()) throw ValidationError("eval.targets entries must be strings");
    rc.targets.push_back(parse_target(t.get<std::string>()));
  }
  if (rc.targets.empty()) throw ValidationError("eval.targets is empty");
  const auto& grid = cfg.at("eval").at("grid");
  if (!grid.is_array()) throw ValidationError("eval.grid must be a list");
  for (const auto& row : grid) {
    GridRow g;
    if (!row.is_object() || !row.contains("features") || !row.contains("model")) {
      throw ValidationError("eval.grid rows need \"features\" and \"model\"");
    }
    g.blocks = detail::parse_blocks(row.at("features"), "eval.grid features");
    g.model = models::parse_model_kind(row.at("model").get<std::string>());
    rc.grid.push_back(std::move(g));
  }
  if (rc.grid.empty()) rc.grid.push_back({rc.blocks, rc.model.kind});
  rc.n_shuffles = detail::get<int>(cfg, "eval", "n_shuffles");
  if (rc.n_shuffles < 0) throw ValidationError("eval.n_shuffles must be >= 0");

  rc.synth.seed = rc.seed;
  rc.synth.users = detail::get<std::size_t>(cfg, "synth", "users");
  rc.synth.male_users = rc.synth.users * 74 / 320;
  rc.synth.behavior_signal = detail::get<double>(cfg, "synth", "behavior_signal");
  rc.synth.content_signal = detail::get<double>(cfg, "synth", "content_signal");
  rc.synth.transformer_signal = detail::get<double>(cfg, "synth", "transformer_signal");
  rc.synth.validate();

  // Model/feature compatibility is checked up front for every grid row.
  for (const auto& g : rc.grid) {
    models::ModelSpec spec = rc.model;
    spec.kind = g.model;
    spec.validate(g.blocks);
  }
  return rc;
}

/// Builds the configuration from defaults, an optional file, --set
/// overrides and the --seed / --jobs flags, in that order.
inline RunConfig build_config(const std::optional<std::filesystem::path>& file,
                              const std::vector<std::string>& overrides,
                              std::optional<std::uint64_t> seed,
                              std::optional<int> jobs) {
  json cfg = default_config();
  if (file) merge_config(cfg, load_config_file(*file));
  for (const auto& o : overrides) apply_override(cfg, o);
  if (seed) cfg["seed"] = *seed;
  if (jobs) cfg["jobs"] = *jobs;
  return validate_config(cfg);
}

}  // namespace cyberaggr::pipeline
