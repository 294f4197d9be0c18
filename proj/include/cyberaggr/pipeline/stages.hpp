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

// Pipeline commands. Layout under paths.output_dir:
//
//   synth/      posts.jsonl profiles.jsonl survey.csv word_vectors.txt
//               lexicon.csv embeddings.tsv config.json
//   ingest/     posts.jsonl profiles.jsonl report.txt report.json filter.json
//   label/      labels.csv thresholds.json
//   features/   features.csv features.schema.json
//   models/     <target>.aggrmdl
//   eval/       report.txt report.json permutation.json
//   predict/    predictions.csv

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "cyberaggr/activity_filter.hpp"
#include "cyberaggr/csv.hpp"
#include "cyberaggr/embedding_io.hpp"
#include "cyberaggr/errors.hpp"
#include "cyberaggr/eval/cross_validation.hpp"
#include "cyberaggr/eval/report.hpp"
#include "cyberaggr/features/assemble.hpp"
#include "cyberaggr/features/content.hpp"
#include "cyberaggr/features/emotion.hpp"
#include "cyberaggr/ingest.hpp"
#include "cyberaggr/labeling.hpp"
#include "cyberaggr/models/classifier.hpp"
#include "cyberaggr/models/model_io.hpp"
#include "cyberaggr/pipeline/manifest.hpp"
#include "cyberaggr/pipeline/run_config.hpp"
#include "cyberaggr/synth.hpp"

namespace cyberaggr::pipeline {

namespace fs = std::filesystem;

enum class ReportFormat { kText, kJson, kBoth };

inline ReportFormat parse_format(std::string_view s) {
  if (s == "text") return ReportFormat::kText;
  if (s == "json") return ReportFormat::kJson;
  if (s == "both") return ReportFormat::kBoth;
  throw ValidationError("--format must be text, json or both");
}

struct Context {
  RunConfig cfg;
  bool force = false;
  ReportFormat format = ReportFormat::kBoth;
  std::ostream* log = nullptr;

  void note(const std::string& msg) const {
    if (log) *log << msg << "\n";
  }
  fs::path dir(const char* stage) const { return cfg.output_dir / stage; }
};

namespace detail {

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::ifstream open_input(const fs::path& p, const char* what) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot open " + std::string(what) + " " + p.string());
  return in;
}

// A configured input path that must exist.
inline fs::path require_path(const fs::path& p, const char* key) {
  if (p.empty()) throw ValidationError("paths." + std::string(key) + " is not set");
  if (!fs::exists(p)) {
    throw ValidationError("paths." + std::string(key) + " does not exist: " + p.string());
  }
  return p;
}

// An intermediate produced by an earlier command.
inline fs::path require_stage_output(const fs::path& p, const char* producer) {
  if (!fs::exists(p)) {
    throw ValidationError("missing " + p.string() + "; run `cyberaggr " + producer +
                          "` first");
  }
  return p;
}

inline nlohmann::json sections(const RunConfig& cfg, std::initializer_list<const char*> keys) {
  nlohmann::json j = nlohmann::json::object();
  for (const char* k : keys) j[k] = cfg.raw.at(k);
  return j;
}

struct PendingOutput {
  fs::path path;
  std::string bytes;
};

// Applies the write-once rule to every output, then writes them.
inline void commit(const Context& ctx, const RunIdentity& id,
                   const std::vector<PendingOutput>& outputs) {
  for (const auto& o : outputs) {
    if (check_output(o.path, id, ctx.force) == WriteDecision::kUpToDate &&
        !ctx.force) {
      ctx.note("up to date: " + o.path.string());
    }
  }
  for (const auto& o : outputs) {
    write_output(o.path, o.bytes, id);
    ctx.note("wrote " + o.path.string());
  }
}

// Returns true when every output is already current for this run.
inline bool all_up_to_date(const Context& ctx, const RunIdentity& id,
                           const std::vector<fs::path>& outputs) {
  if (ctx.force) return false;
  bool current = true;
  for (const auto& p : outputs) {
    if (check_output(p, id, false) != WriteDecision::kUpToDate) current = false;
  }
  if (current) {
    for (const auto& p : outputs) ctx.note("up to date: " + p.string());
  }
  return current;
}

inline std::vector<UserRecord> load_ingested(const Context& ctx) {
  const auto posts = require_stage_output(ctx.dir("ingest") / "posts.jsonl", "ingest");
  const auto profiles =
      require_stage_output(ctx.dir("ingest") / "profiles.jsonl", "ingest");
  auto ps = open_input(posts, "posts");
  auto pr = open_input(profiles, "profiles");
  auto res = ingest_dataset(ps, pr);
  if (!res.report.dropped.empty()) {
    throw DataError("ingested files are corrupt (" + std::to_string(res.report.dropped.size()) +
                    " bad lines); rerun `cyberaggr ingest --force`");
  }
  return std::move(res.users);
}

// Blocks whose resources are configured.
inline std::vector<features::Block> available_blocks(const RunConfig& cfg) {
  std::vector<features::Block> b = {features::Block::kBasic, features::Block::kDynamic};
  if (!cfg.word_vectors.empty()) b.push_back(features::Block::kContent);
  if (!cfg.lexicon.empty()) b.push_back(features::Block::kEmotion);
  if (!cfg.embeddings.empty()) b.push_back(features::Block::kTransformer);
  return b;
}

inline const char* resource_key(features::Block b) {
  switch (b) {
    case features::Block::kContent:
      return "word_vectors";
    case features::Block::kEmotion:
      return "lexicon";
    case features::Block::kTransformer:
      return "embeddings";
    default:
      return "";
  }
}

// Every block the command will consume must have its resource configured.
inline void require_resources(const RunConfig& cfg, std::span<const features::Block> blocks,
                              models::ModelKind kind) {
  const auto have = available_blocks(cfg);
  for (auto b : blocks) {
    if (std::find(have.begin(), have.end(), b) == have.end()) {
      throw ValidationError(std::string(models::model_kind_name(kind)) + " on " +
                            features::blocks_label(blocks) + " needs paths." +
                            resource_key(b) + " to be set");
    }
  }
}

struct Dataset {
  std::vector<std::string> user_ids;
  features::FeatureTable table;
  std::vector<LabelSet> labels;  // aligned with user_ids
};

// Users present in both the feature table and the labels, in label order.
inline Dataset load_training_data(const Context& ctx, fs::path& features_path,
                                  fs::path& labels_path) {
  features_path =
      require_stage_output(ctx.dir("features") / "features.csv", "featurize");
  labels_path = require_stage_output(ctx.dir("label") / "labels.csv", "label");
  Dataset d;
  {
    auto in = open_input(features_path, "features");
    d.table = features::read_features_csv(in);
  }
  auto in = open_input(labels_path, "labels");
  const auto labels = read_labels_csv(in);
  std::unordered_map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < d.table.rows.size(); ++i) idx[d.table.rows[i].user_id] = i;
  std::vector<features::FeatureVector> rows;
  for (const auto& l : labels) {
    auto it = idx.find(l.user_id);
    if (it == idx.end()) {
      throw DataError("labeled user " + l.user_id +
                      " has no feature row; rerun `cyberaggr featurize`");
    }
    rows.push_back(d.table.rows[it->second]);
    d.user_ids.push_back(l.user_id);
    d.labels.push_back(l);
  }
  d.table.rows = std::move(rows);
  return d;
}

inline void require_blocks_present(const features::FeatureTable& t,
                                   std::span<const features::Block> blocks) {
  for (auto b : blocks) {
    if (std::find(t.blocks.begin(), t.blocks.end(), b) == t.blocks.end()) {
      throw ValidationError("features.csv lacks the " + std::string(features::block_name(b)) +
                            " block; set paths." + resource_key(b) +
                            " and rerun `cyberaggr featurize`");
    }
  }
}

inline std::vector<Label> target_labels(const Dataset& d, Target t) {
  std::vector<Label> y;
  for (const auto& l : d.labels) y.push_back(l[t]);
  return y;
}

}  // namespace detail

inline void run_synth(const Context& ctx) {
  const auto dir = ctx.dir("synth");
  const auto id = make_identity("synth", detail::sections(ctx.cfg, {"seed", "synth"}), {});
  const std::vector<fs::path> outs = {dir / "posts.jsonl",     dir / "profiles.jsonl",
                                      dir / "survey.csv",      dir / "word_vectors.txt",
                                      dir / "lexicon.csv",     dir / "embeddings.tsv",
                                      dir / "config.json"};
  if (detail::all_up_to_date(ctx, id, outs)) return;
  const auto ds = synth::generate(ctx.cfg.synth);

  std::ostringstream posts, profiles, survey, vectors, lexicon, emb;
  write_dataset(ds.users, posts, profiles);
  write_survey_csv(ds.survey, survey);
  vectors << ds.word_vectors.size() << " " << ctx.cfg.synth.word_vector_dim << "\n";
  for (const auto& [w, v] : ds.word_vectors) {
    vectors << w;
    for (double x : v) vectors << " " << csv::format_double(x);
    vectors << "\n";
  }
  lexicon << "token,emotion\n";
  for (const auto& [w, e] : ds.lexicon) {
    lexicon << csv::escape(w) << "," << features::kEmotionNames[static_cast<int>(e)] << "\n";
  }
  write_embeddings(ds.embeddings, emb);

  // A ready-to-use configuration pointing at the generated files.
  nlohmann::json cfg = ctx.cfg.raw;
  const auto abs = [&](const char* f) { return fs::absolute(dir / f).lexically_normal().string(); };
  cfg["paths"]["posts"] = abs("posts.jsonl");
  cfg["paths"]["profiles"] = abs("profiles.jsonl");
  cfg["paths"]["survey"] = abs("survey.csv");
  cfg["paths"]["word_vectors"] = abs("word_vectors.txt");
  cfg["paths"]["lexicon"] = abs("lexicon.csv");
  cfg["paths"]["embeddings"] = abs("embeddings.tsv");
  cfg["paths"]["output_dir"] = fs::absolute(ctx.cfg.output_dir).lexically_normal().string();

  detail::commit(ctx, id,
                 {{outs[0], posts.str()},
                  {outs[1], profiles.str()},
                  {outs[2], survey.str()},
                  {outs[3], vectors.str()},
                  {outs[4], lexicon.str()},
                  {outs[5], emb.str()},
                  {outs[6], cfg.dump(2) + "\n"}});
}

inline void run_ingest(const Context& ctx) {
  const auto posts_path = detail::require_path(ctx.cfg.posts, "posts");
  const auto profiles_path = detail::require_path(ctx.cfg.profiles, "profiles");
  const auto dir = ctx.dir("ingest");
  const auto id = make_identity("ingest", detail::sections(ctx.cfg, {"ingest", "filter"}),
                                {posts_path, profiles_path});
  const std::vector<fs::path> outs = {dir / "posts.jsonl", dir / "profiles.jsonl",
                                      dir / "report.txt", dir / "report.json",
                                      dir / "filter.json"};
  if (detail::all_up_to_date(ctx, id, outs)) return;

  auto ps = detail::open_input(posts_path, "posts");
  auto pr = detail::open_input(profiles_path, "profiles");
  IngestOptions opts;
  opts.naive_offset = ctx.cfg.naive_offset;
  const auto res = ingest_dataset(ps, pr, opts);
  const auto filtered = apply_activity_filter(res.users, ctx.cfg.filter);

  std::ostringstream posts, profiles;
  write_dataset(filtered.kept, posts, profiles);
  nlohmann::json fj;
  fj["before"] = dataset_summary(res.users).to_json();
  fj["after"] = dataset_summary(filtered.kept).to_json();
  fj["dropped"] = nlohmann::json::array();
  for (const auto& [user, reason] : filtered.dropped) {
    fj["dropped"].push_back({{"user_id", user}, {"reason", reason}});
  }
  for (const auto& w : res.report.warnings) ctx.note("warning: " + w);
  ctx.note("ingested " + std::to_string(res.report.users) + " users, kept " +
           std::to_string(filtered.kept.size()) + " after the activity filter");
  detail::commit(ctx, id,
                 {{outs[0], posts.str()},
                  {outs[1], profiles.str()},
                  {outs[2], res.report.to_text()},
                  {outs[3], res.report.to_json().dump(2) + "\n"},
                  {outs[4], fj.dump(2) + "\n"}});
}

inline void run_label(const Context& ctx) {
  const auto profiles =
      detail::require_stage_output(ctx.dir("ingest") / "profiles.jsonl", "ingest");
  const auto survey_path = detail::require_path(ctx.cfg.survey, "survey");
  const auto dir = ctx.dir("label");
  const auto id = make_identity("label", nlohmann::json::object(), {profiles, survey_path});
  const std::vector<fs::path> outs = {dir / "labels.csv", dir / "thresholds.json"};
  if (detail::all_up_to_date(ctx, id, outs)) return;

  const auto users = detail::load_ingested(ctx);
  auto in = detail::open_input(survey_path, "survey");
  const auto survey = read_survey_csv(in);
  std::unordered_map<std::string, const SurveyResponse*> by_user;
  for (const auto& r : survey) {
    if (!by_user.emplace(r.user_id, &r).second) {
      throw DataError("survey has more than one response for user " + r.user_id);
    }
  }
  std::vector<std::pair<std::string, AggressionScores>> scores;
  std::vector<std::string> unlabeled;
  for (const auto& u : users) {
    auto it = by_user.find(u.id());
    if (it == by_user.end()) {
      unlabeled.push_back(u.id());
      continue;
    }
    try {
      scores.emplace_back(u.id(), score_survey(*it->second));
    } catch (const ValidationError& e) {
      throw DataError("survey response for " + u.id() + ": " + e.what());
    }
  }
  const auto cohort = label_cohort(scores);
  std::ostringstream labels;
  write_labels_csv(cohort.labels, labels);
  auto tj = thresholds_to_json(cohort);
  tj["cohort_size"] = cohort.labels.size();
  tj["unlabeled_users"] = unlabeled;
  tj["survey_rows_outside_cohort"] = survey.size() - scores.size();
  if (!unlabeled.empty()) {
    ctx.note("warning: " + std::to_string(unlabeled.size()) +
             " kept users have no survey response and are left unlabeled");
  }
  detail::commit(ctx, id, {{outs[0], labels.str()}, {outs[1], tj.dump(2) + "\n"}});
}

inline void run_featurize(const Context& ctx) {
  for (const auto& g : ctx.cfg.grid) detail::require_resources(ctx.cfg, g.blocks, g.model);
  detail::require_resources(ctx.cfg, ctx.cfg.blocks, ctx.cfg.model.kind);
  const auto blocks = detail::available_blocks(ctx.cfg);
  std::vector<fs::path> inputs = {
      detail::require_stage_output(ctx.dir("ingest") / "posts.jsonl", "ingest"),
      detail::require_stage_output(ctx.dir("ingest") / "profiles.jsonl", "ingest")};
  if (!ctx.cfg.word_vectors.empty()) {
    inputs.push_back(detail::require_path(ctx.cfg.word_vectors, "word_vectors"));
  }
  if (!ctx.cfg.lexicon.empty()) inputs.push_back(detail::require_path(ctx.cfg.lexicon, "lexicon"));
  if (!ctx.cfg.embeddings.empty()) {
    inputs.push_back(detail::require_path(ctx.cfg.embeddings, "embeddings"));
  }
  const auto dir = ctx.dir("features");
  nlohmann::json sec = {{"blocks", features::blocks_label(blocks)},
                        {"registry_version", features::kRegistryVersion}};
  const auto id = make_identity("featurize", sec, inputs);
  const std::vector<fs::path> outs = {dir / "features.csv", dir / "features.schema.json"};
  if (detail::all_up_to_date(ctx, id, outs)) return;

  const auto users = detail::load_ingested(ctx);
  features::WordVectorTable vectors;
  features::EmotionLexicon lexicon;
  EmbeddingTable embeddings;
  features::FeatureResources res;
  if (!ctx.cfg.word_vectors.empty()) {
    auto in = detail::open_input(ctx.cfg.word_vectors, "word vectors");
    vectors = features::load_word_vectors(in);
    if (vectors.dimension() != features::kContentWidth) {
      throw DataError("word vectors are " + std::to_string(vectors.dimension()) +
                      "-dimensional; the content block needs " +
                      std::to_string(features::kContentWidth));
    }
    res.word_vectors = &vectors;
  }
  if (!ctx.cfg.lexicon.empty()) {
    auto in = detail::open_input(ctx.cfg.lexicon, "lexicon");
    lexicon = features::load_emotion_lexicon(in);
    res.lexicon = &lexicon;
  }
  if (!ctx.cfg.embeddings.empty()) {
    auto in = detail::open_input(ctx.cfg.embeddings, "embeddings");
    embeddings = load_embeddings(in);
    const auto cov = join_embeddings(users, embeddings);
    if (!cov.unused.empty()) {
      ctx.note("note: " + std::to_string(cov.unused.size()) +
               " embedding rows match no ingested user");
    }
    res.embeddings = &embeddings;
  }
  const auto rows = features::assemble_all(users, blocks, res, ctx.cfg.jobs);
  std::ostringstream csv_out;
  features::write_features_csv(rows, blocks, csv_out);
  auto schema = features::features_schema(blocks);
  if (res.embeddings) schema["embedding_provenance"] = embeddings.provenance();
  detail::commit(ctx, id,
                 {{outs[0], csv_out.str()}, {outs[1], schema.dump(2) + "\n"}});
}

inline fs::path model_path(const Context& ctx, Target t) {
  return ctx.dir("models") / (std::string(target_name(t)) + ".aggrmdl");
}

inline std::string embedding_provenance(const Context& ctx) {
  const auto schema = ctx.dir("features") / "features.schema.json";
  if (!fs::exists(schema)) return {};
  std::ifstream in(schema);
  const auto j = nlohmann::json::parse(in, nullptr, false);
  return j.is_object() ? j.value("embedding_provenance", "") : "";
}

inline void run_train(const Context& ctx) {
  detail::require_resources(ctx.cfg, ctx.cfg.blocks, ctx.cfg.model.kind);
  ctx.cfg.model.validate(ctx.cfg.blocks);
  fs::path fpath, lpath;
  const auto data = detail::load_training_data(ctx, fpath, lpath);
  detail::require_blocks_present(data.table, ctx.cfg.blocks);
  const auto id = make_identity(
      "train", detail::sections(ctx.cfg, {"seed", "features", "model"}), {fpath, lpath});
  std::vector<fs::path> outs;
  for (Target t : ctx.cfg.targets) outs.push_back(model_path(ctx, t));
  if (detail::all_up_to_date(ctx, id, outs)) return;

  const auto X = models::design_matrix(data.table.rows, ctx.cfg.blocks);
  const auto provenance = embedding_provenance(ctx);
  std::vector<detail::PendingOutput> pending(ctx.cfg.targets.size());
  parallel_for(ctx.cfg.targets.size(), ctx.cfg.jobs, [&](std::size_t i) {
    const Target t = ctx.cfg.targets[i];
    const auto m = models::fit_model(ctx.cfg.model, ctx.cfg.blocks, X,
                                     detail::target_labels(data, t), provenance);
    std::ostringstream os(std::ios::binary);
    models::save_model(m, os);
    pending[i] = {model_path(ctx, t), os.str()};
  });
  detail::commit(ctx, id, pending);
}

inline void run_eval(const Context& ctx) {
  for (const auto& g : ctx.cfg.grid) detail::require_resources(ctx.cfg, g.blocks, g.model);
  fs::path fpath, lpath;
  const auto data = detail::load_training_data(ctx, fpath, lpath);
  for (const auto& g : ctx.cfg.grid) detail::require_blocks_present(data.table, g.blocks);
  const auto id = make_identity(
      "eval", detail::sections(ctx.cfg, {"seed", "model", "eval", "features"}),
      {fpath, lpath});
  const auto dir = ctx.dir("eval");
  std::vector<fs::path> outs;
  if (ctx.format != ReportFormat::kJson) outs.push_back(dir / "report.txt");
  if (ctx.format != ReportFormat::kText) outs.push_back(dir / "report.json");
  if (ctx.cfg.n_shuffles > 0) outs.push_back(dir / "permutation.json");
  if (detail::all_up_to_date(ctx, id, outs)) return;

  const auto provenance = embedding_provenance(ctx);
  eval::CvOptions co;
  co.k = ctx.cfg.k;
  co.seed = ctx.cfg.seed;
  co.protocol = ctx.cfg.protocol;
  co.jobs = ctx.cfg.jobs;
  co.embedding_provenance = provenance;

  std::vector<eval::EvalReport> reports;
  nlohmann::json perm = nlohmann::json::array();
  for (Target t : ctx.cfg.targets) {
    const auto y = detail::target_labels(data, t);
    for (const auto& g : ctx.cfg.grid) {
      models::ModelSpec spec = ctx.cfg.model;
      spec.kind = g.model;
      const auto X = models::design_matrix(data.table.rows, g.blocks);
      auto cv = eval::cross_validate(X, y, g.blocks, spec, co);
      cv.report.target = std::string(target_display(t));
      ctx.note(cv.report.target + " / " + eval::features_display(g.blocks) + " / " +
               std::string(models::model_kind_display(g.model)) + ": ACC " +
               eval::percent_cell(cv.report.acc) + " F1 " +
               eval::percent_cell(cv.report.macro_f1) + " AUC " +
               eval::percent_cell(cv.report.ovr_auc));
      reports.push_back(std::move(cv.report));
      if (ctx.cfg.n_shuffles > 0) {
        const auto p = eval::permutation_baseline(X, y, g.blocks, spec, co, ctx.cfg.n_shuffles);
        nlohmann::json runs = nlohmann::json::array();
        for (const auto& r : p.runs) {
          runs.push_back({{"acc", r.acc}, {"macro_f1", r.macro_f1}, {"ovr_auc", r.ovr_auc}});
        }
        perm.push_back({{"target", std::string(target_name(t))},
                        {"features", features::blocks_label(g.blocks)},
                        {"model", std::string(models::model_kind_name(g.model))},
                        {"n_shuffles", ctx.cfg.n_shuffles},
                        {"mean_acc", p.mean_acc()},
                        {"mean_macro_f1", p.mean_macro_f1()},
                        {"mean_ovr_auc", p.mean_ovr_auc()},
                        {"runs", runs}});
      }
    }
  }
  std::vector<detail::PendingOutput> pending;
  if (ctx.format != ReportFormat::kJson) {
    pending.push_back({dir / "report.txt", eval::render_text(reports)});
  }
  if (ctx.format != ReportFormat::kText) {
    pending.push_back({dir / "report.json", eval::render_json(reports).dump(2) + "\n"});
  }
  if (ctx.cfg.n_shuffles > 0) pending.push_back({dir / "permutation.json", perm.dump(2) + "\n"});
  detail::commit(ctx, id, pending);
  if (ctx.log && ctx.format != ReportFormat::kJson) *ctx.log << eval::render_text(reports);
}

inline void run_predict(const Context& ctx) {
  const auto fpath =
      detail::require_stage_output(ctx.dir("features") / "features.csv", "featurize");
  std::vector<fs::path> inputs = {fpath};
  for (Target t : ctx.cfg.targets) {
    inputs.push_back(detail::require_stage_output(model_path(ctx, t), "train"));
  }
  const auto out = ctx.dir("predict") / "predictions.csv";
  const auto id = make_identity("predict", nlohmann::json::object(), inputs);
  if (detail::all_up_to_date(ctx, id, {out})) return;

  features::FeatureTable table;
  {
    auto in = detail::open_input(fpath, "features");
    table = features::read_features_csv(in);
  }
  std::ostringstream os;
  os << "user_id,target,label,p_low,p_neutral,p_high\n";
  for (Target t : ctx.cfg.targets) {
    auto in = detail::open_input(model_path(ctx, t), "model");
    const auto m = models::load_model(in);
    detail::require_blocks_present(table, m.blocks);
    const auto X = models::design_matrix(table.rows, m.blocks);
    const auto p = models::predict_proba(m, X);
    const auto labels = models::argmax_labels(p);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      os << csv::escape(table.rows[i].user_id) << "," << target_name(t) << ","
         << labels[i] << "," << csv::format_double(p(r, 0)) << ","
         << csv::format_double(p(r, 1)) << "," << csv::format_double(p(r, 2)) << "\n";
    }
  }
  detail::commit(ctx, id, {{out, os.str()}});
}

/// ingest, label, featurize, train and eval in sequence.
inline void run_all(const Context& ctx) {
  run_ingest(ctx);
  run_label(ctx);
  run_featurize(ctx);
  run_train(ctx);
  run_eval(ctx);
}

}  // namespace cyberaggr::pipeline
