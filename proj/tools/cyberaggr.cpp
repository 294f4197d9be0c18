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

// Command-line driver. Exit codes: 0 success, 2 validation error, 3 data
// error, 4 numeric failure.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cyberaggr/errors.hpp"
#include "cyberaggr/pipeline/manifest.hpp"
#include "cyberaggr/pipeline/run_config.hpp"
#include "cyberaggr/pipeline/stages.hpp"

namespace {

using namespace cyberaggr;

constexpr int kExitValidation = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

// Feature-set x model rows of the standard comparison table, restricted to
// what the configured resources allow.
nlohmann::json standard_grid(const pipeline::RunConfig& cfg) {
  nlohmann::json grid = nlohmann::json::array();
  for (const char* m : {"lr", "svm", "nn"}) {
    grid.push_back({{"features", {"basic", "dynamic"}}, {"model", m}});
  }
  if (!cfg.word_vectors.empty()) {
    std::vector<std::string> content = {"content"};
    if (!cfg.lexicon.empty()) content.push_back("emotion");
    for (const char* m : {"lr", "svm", "nn"}) {
      grid.push_back({{"features", content}, {"model", m}});
    }
  }
  if (!cfg.embeddings.empty()) {
    grid.push_back({{"features", {"basic", "dynamic", "transformer"}}, {"model", "aug_head"}});
  }
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cyber-aggression prediction pipeline"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(pipeline::kToolVersion));

  std::optional<std::string> config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string format = "both";
  bool force = false;
  bool quiet = false;
  bool grid = false;

  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--set", overrides, "Override a config value: key.path=value")
      ->take_all();
  app.add_option("--seed", seed, "Seed for folds, model initialization and synth");
  app.add_option("--jobs", jobs, "Worker threads (0 = all logical cores)");
  app.add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"text", "json", "both"}));
  app.add_flag("--force", force, "Overwrite outputs produced by a different run");
  app.add_flag("--quiet", quiet, "Suppress progress messages");

  using Stage = std::function<void(const pipeline::Context&)>;
  const std::vector<std::tuple<const char*, const char*, Stage>> commands = {
      {"synth", "Generate a seeded synthetic cohort", pipeline::run_synth},
      {"ingest", "Parse posts/profiles and apply the activity filter", pipeline::run_ingest},
      {"label", "Score the survey and trisect each target", pipeline::run_label},
      {"featurize", "Compute feature blocks for every kept user", pipeline::run_featurize},
      {"train", "Fit one model per target on all labeled users", pipeline::run_train},
      {"eval", "Cross-validate the configured feature/model rows", pipeline::run_eval},
      {"predict", "Score users with trained models", pipeline::run_predict},
      {"run", "ingest, label, featurize, train and eval in sequence", pipeline::run_all},
  };
  std::map<CLI::App*, Stage> stage_of;
  for (const auto& [name, help, fn] : commands) {
    auto* sub = app.add_subcommand(name, help);
    if (std::string(name) == "eval" || std::string(name) == "run") {
      sub->add_flag("--grid", grid,
                    "Evaluate the standard feature-set x model table instead of the "
                    "single configured row");
    }
    stage_of[sub] = fn;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  try {
    pipeline::Context ctx;
    std::optional<std::filesystem::path> cfg_file;
    if (config_path) cfg_file = *config_path;
    ctx.cfg = pipeline::build_config(cfg_file, overrides, seed, jobs);
    if (grid) {
      ctx.cfg.raw["eval"]["grid"] = standard_grid(ctx.cfg);
      ctx.cfg = pipeline::validate_config(ctx.cfg.raw);
    }
    ctx.force = force;
    ctx.format = pipeline::parse_format(format);
    ctx.log = quiet ? nullptr : &std::cerr;
    for (auto* sub : app.get_subcommands()) stage_of.at(sub)(ctx);
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
