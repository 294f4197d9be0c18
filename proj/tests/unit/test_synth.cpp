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

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cyberaggr/activity_filter.hpp"
#include "cyberaggr/ingest.hpp"
#include "cyberaggr/synth.hpp"

namespace cyberaggr {
namespace {

synth::SynthOptions small(std::uint64_t seed = 7) {
  synth::SynthOptions o;
  o.users = 40;
  o.male_users = 9;
  o.seed = seed;
  return o;
}

std::string serialize(const synth::SynthDataset& ds) {
  std::ostringstream posts, profiles, emb;
  write_dataset(ds.users, posts, profiles);
  write_embeddings(ds.embeddings, emb);
  return posts.str() + profiles.str() + emb.str();
}

TEST(Synth, SameSeedSameBytes) {
  EXPECT_EQ(serialize(synth::generate(small())), serialize(synth::generate(small())));
}

TEST(Synth, DifferentSeedDiffers) {
  EXPECT_NE(serialize(synth::generate(small(7))), serialize(synth::generate(small(8))));
}

TEST(Synth, CohortShape) {
  const auto ds = synth::generate(small());
  ASSERT_EQ(ds.users.size(), 40u);
  ASSERT_EQ(ds.survey.size(), 40u);
  ASSERT_EQ(ds.labels.labels.size(), 40u);
  std::size_t male = 0;
  std::set<std::string> ids;
  for (const auto& u : ds.users) {
    male += u.profile.gender == Gender::kMale;
    ids.insert(u.id());
    EXPECT_TRUE(std::is_sorted(u.posts.begin(), u.posts.end(),
                               [](const Post& a, const Post& b) {
                                 return a.timestamp < b.timestamp;
                               }));
  }
  EXPECT_EQ(male, 9u);
  EXPECT_EQ(ids.size(), 40u);
}

TEST(Synth, EveryUserPassesDefaultFilter) {
  const auto ds = synth::generate(small());
  const auto r = apply_activity_filter(ds.users, {});
  EXPECT_EQ(r.kept.size(), ds.users.size());
}

TEST(Synth, LabelsFollowFromSurvey) {
  const auto ds = synth::generate(small());
  std::vector<std::pair<std::string, AggressionScores>> scores;
  for (const auto& r : ds.survey) scores.emplace_back(r.user_id, score_survey(r));
  const auto relabeled = label_cohort(scores);
  for (std::size_t i = 0; i < ds.users.size(); ++i) {
    EXPECT_EQ(relabeled.labels[i].user_id, ds.users[i].id());
    EXPECT_EQ(relabeled.labels[i].labels, ds.labels.labels[i].labels);
  }
}

TEST(Synth, EmbeddingForEveryUser) {
  const auto ds = synth::generate(small());
  EXPECT_EQ(ds.embeddings.dimension(), kEmbeddingDim);
  EXPECT_EQ(ds.embeddings.size(), ds.users.size());
  for (const auto& u : ds.users) EXPECT_TRUE(ds.embeddings.find(u.id()).has_value());
}

TEST(Synth, DerivedCountsMatchText) {
  const auto ds = synth::generate(small());
  for (const auto& u : ds.users) {
    for (const auto& p : u.posts) {
      EXPECT_EQ(p.mention_count, count_mentions(p.text));
      EXPECT_EQ(p.hashtag_count, count_hashtags(p.text));
      EXPECT_EQ(p.url_count, count_urls(p.text));
    }
  }
}

TEST(Synth, WordVectorsHaveConfiguredWidth) {
  auto o = small();
  o.word_vector_dim = 16;
  const auto ds = synth::generate(o);
  ASSERT_FALSE(ds.word_vectors.empty());
  for (const auto& [w, v] : ds.word_vectors) EXPECT_EQ(v.size(), 16u);
  EXPECT_EQ(ds.lexicon.size(), 35u);
}

TEST(Synth, RejectsBadOptions) {
  auto o = small();
  o.users = 9;
  EXPECT_THROW(synth::generate(o), ValidationError);
  o = small();
  o.male_users = 41;
  EXPECT_THROW(synth::generate(o), ValidationError);
  o = small();
  o.behavior_signal = 1.5;
  EXPECT_THROW(synth::generate(o), ValidationError);
  o = small();
  o.transformer_signal = -0.1;
  EXPECT_THROW(synth::generate(o), ValidationError);
  o = small();
  o.word_vector_dim = 0;
  EXPECT_THROW(synth::generate(o), ValidationError);
}

}  // namespace
}  // namespace cyberaggr
