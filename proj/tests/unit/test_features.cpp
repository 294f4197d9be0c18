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
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cyberaggr/features/assemble.hpp"
#include "fixtures.hpp"

namespace cyberaggr::features {
namespace {

using testing::make_post;
using testing::make_user;

constexpr std::size_t kPictureCount = 19;
constexpr std::size_t kPictureProportion = 20;
constexpr std::size_t kSpanDays = 8;
constexpr std::size_t kActiveDayProportion = 11;
constexpr std::size_t kHourEntropy = 39;
constexpr std::size_t kWeekdayEntropy = 40;

TEST(Registry, NamesAndWidths) {
  EXPECT_EQ(basic_feature_names()[kPictureCount], "picture_posts");
  EXPECT_EQ(basic_feature_names()[kPictureProportion], "picture_proportion");
  EXPECT_EQ(basic_feature_names()[kActiveDayProportion], "active_day_proportion");
  EXPECT_EQ(basic_feature_names()[kHourEntropy], "hour_entropy");
  for (Block b : kAllBlocks) {
    EXPECT_EQ(column_names(b).size(), block_width(b));
    EXPECT_EQ(parse_block(block_name(b)), b);
  }
  EXPECT_EQ(column_names(Block::kDynamic)[24], "dyn_post_mon");
  EXPECT_THROW(parse_block("bogus"), ValidationError);
}

TEST(Basic, SinglePost) {
  const auto f = extract_basic(make_user("u", {make_post("a", "2020-03-02T10:17:00Z")}));
  ASSERT_EQ(f.size(), kBasicWidth);
  EXPECT_EQ(f[kSpanDays], 0.0);
  EXPECT_EQ(f[12], 0.0);  // longest gap
  EXPECT_EQ(f[13], 0.0);  // mean gap
  EXPECT_EQ(f[14], 0.0);  // gap sd
  EXPECT_EQ(f[kActiveDayProportion], 1.0);
}

TEST(Basic, PictureShare) {
  const auto u = make_user("u", {make_post("a", "2020-03-02T10:00:00Z", "x", true),
                                 make_post("b", "2020-03-03T10:00:00Z", "x", true),
                                 make_post("c", "2020-03-04T10:00:00Z"),
                                 make_post("d", "2020-03-05T10:00:00Z")});
  const auto f = extract_basic(u);
  EXPECT_EQ(f[kPictureCount], 2.0);
  EXPECT_EQ(f[kPictureProportion], 0.5);
  EXPECT_EQ(f[kSpanDays], 3.0);
  EXPECT_EQ(f[12], 1.0);
  EXPECT_DOUBLE_EQ(f[13], 24.0);
}

TEST(Basic, NoPosts) {
  const auto f = extract_basic(make_user("u"));
  ASSERT_EQ(f.size(), kBasicWidth);
  for (double x : f) EXPECT_TRUE(std::isfinite(x));
}

TEST(Dynamic, SingleMondayPost) {
  const auto f = extract_dynamic(make_user("u", {make_post("a", "2020-03-02T10:17:00Z")}));
  ASSERT_EQ(f.size(), kDynamicWidth);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double want = i == 10 ? 1.0 : i == 24 ? 7.0 : 0.0;
    EXPECT_EQ(f[i], want) << i;
  }
}

TEST(Dynamic, NoRetweetsGivesZeroSubvector) {
  Rng rng(4);
  auto u = testing::random_user(rng, "u");
  for (auto& p : u.posts) p.is_retweet = false;
  const auto f = extract_dynamic(u);
  for (std::size_t i = 62; i < 93; ++i) EXPECT_EQ(f[i], 0.0);
}

TEST(Dynamic, RatesConserveCounts) {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = testing::random_user(rng, "u", 80);
    const auto f = extract_dynamic(u);
    const double days = span_days(u);
    double counts[3] = {0, 0, 0};
    for (const auto& p : u.posts) {
      counts[0] += 1;
      counts[1] += p.mention_count > 0;
      counts[2] += p.is_retweet;
    }
    for (int k = 0; k < 3; ++k) {
      double hours = 0, weekdays = 0;
      for (int h = 0; h < 24; ++h) hours += f[31 * k + h];
      for (int d = 0; d < 7; ++d) weekdays += f[31 * k + 24 + d];
      EXPECT_NEAR(hours * days, counts[k], 1e-9);
      EXPECT_NEAR(weekdays * days / 7.0, counts[k], 1e-9);
    }
  }
}

WordVectorTable table_of(std::size_t dim,
                         const std::vector<std::pair<std::string, std::vector<double>>>& rows) {
  WordVectorTable t(dim);
  for (const auto& [w, v] : rows) t.add(w, v);
  return t;
}

TEST(Content, OneTokenPostIsIdentity) {
  const auto t = table_of(3, {{"猫", {1, 2, 3}}, {"狗", {4, 5, 6}}});
  const auto r = extract_content(make_user("u", {make_post("a", "2020-01-01T00:00Z", "猫")}), t);
  EXPECT_EQ(r.vector, (std::vector<double>{1, 2, 3}));
}

TEST(Content, MeanOfDocuments) {
  const auto t = table_of(2, {{"u", {1, 3}}, {"v", {5, -1}}});
  const auto r = extract_content(make_user("x", {make_post("a", "2020-01-01T00:00Z", "u"),
                                                 make_post("b", "2020-01-02T00:00Z", "v")}),
                                 t);
  EXPECT_DOUBLE_EQ(r.vector[0], 3.0);
  EXPECT_DOUBLE_EQ(r.vector[1], 1.0);
}

TEST(Content, OovDocumentCountsAsZero) {
  const auto t = table_of(2, {{"A", {2, 0}}, {"B", {0, 4}}});
  const auto r = extract_content(make_user("x", {make_post("a", "2020-01-01T00:00Z", "A B"),
                                                 make_post("b", "2020-01-02T00:00Z", "C")}),
                                 t);
  EXPECT_DOUBLE_EQ(r.vector[0], 0.5);  // ((a+b)/2 + 0) / 2
  EXPECT_DOUBLE_EQ(r.vector[1], 1.0);
  EXPECT_EQ(r.oov.oov_documents, 1u);
  EXPECT_EQ(r.oov.documents, 2u);
}

TEST(Content, IdenticalDocumentsGiveExactVector) {
  const std::vector<double> v = {0.1, -0.7, 1e-3};
  const auto t = table_of(3, {{"词", v}});
  std::vector<Post> posts;
  for (int i = 0; i < 37; ++i) {
    posts.push_back(make_post("p" + std::to_string(i), "2020-01-01T00:00Z", "词 词 词"));
  }
  const auto r = extract_content(make_user("x", posts), t);
  EXPECT_EQ(r.vector, v);
}

TEST(Content, LongestMatchWins) {
  const auto t = table_of(1, {{"今天", {10}}, {"今", {1}}, {"天", {2}}});
  const auto r = extract_content(make_user("x", {make_post("a", "2020-01-01T00:00Z", "今天")}), t);
  EXPECT_EQ(r.vector[0], 10.0);
  EXPECT_THROW(extract_content(make_user("x"), WordVectorTable(3)), ValidationError);
}

TEST(Content, LoadWordVectors) {
  std::istringstream with_header("2 3\n猫 1 2 3\n狗 4 5 6\n");
  const auto t = load_word_vectors(with_header);
  EXPECT_EQ(t.dimension(), 3u);
  EXPECT_EQ(t.find("狗")[2], 6.0);
  std::istringstream bare("a 1 2\nb 3 4\n");
  EXPECT_EQ(load_word_vectors(bare).size(), 2u);
  std::istringstream ragged("a 1 2\nb 3\n");
  EXPECT_THROW(load_word_vectors(ragged), DataError);
}

EmotionLexicon small_lexicon() {
  EmotionLexicon lex;
  lex.add("怒", Emotion::kAnger);
  lex.add("[怒]", Emotion::kAnger);
  lex.add("开心", Emotion::kHappiness);
  lex.add("难过", Emotion::kSadness);
  return lex;
}

TEST(Emotion, AllAnger) {
  const auto u = make_user("x", {make_post("a", "2020-01-01T00:00Z", "怒"),
                                 make_post("b", "2020-01-02T00:00Z", "好怒[怒]")});
  EXPECT_EQ(extract_emotion(u, small_lexicon()), (std::vector<double>{1, 0, 0, 0, 0}));
}

TEST(Emotion, SharesOfAllPosts) {
  const auto u = make_user("x", {make_post("a", "2020-01-01T00:00Z", "很开心"),
                                 make_post("b", "2020-01-02T00:00Z", "难过"),
                                 make_post("c", "2020-01-03T00:00Z", "平常"),
                                 make_post("d", "2020-01-04T00:00Z", "")});
  EXPECT_EQ(extract_emotion(u, small_lexicon()), (std::vector<double>{0, 0, 0.25, 0.25, 0}));
  EXPECT_EQ(extract_emotion(u, EmotionLexicon{}), std::vector<double>(5, 0.0));
}

TEST(Emotion, LexiconLoading) {
  std::istringstream ok("token,emotion\n怒,anger\n\"a,b\",fear\n");
  const auto lex = load_emotion_lexicon(ok);
  EXPECT_EQ(lex.size(), 2u);
  EXPECT_EQ(lex.find("a,b"), Emotion::kFear);
  std::istringstream conflict("x,anger\nx,fear\n");
  EXPECT_THROW(load_emotion_lexicon(conflict), DataError);
  std::istringstream unknown("x,joy\n");
  EXPECT_THROW(load_emotion_lexicon(unknown), DataError);
}

struct Resources {
  WordVectorTable vectors{kContentWidth};
  EmotionLexicon lexicon = small_lexicon();
  EmbeddingTable embeddings{kEmbeddingDim, "test"};

  explicit Resources(const std::vector<UserRecord>& users) {
    Rng rng(2);
    std::vector<double> v(kContentWidth);
    for (const char* w : {"hello", "world", "好", "今天"}) {
      for (auto& x : v) x = rng.normal();
      vectors.add(w, v);
    }
    std::vector<double> e(kEmbeddingDim);
    for (const auto& u : users) {
      for (auto& x : e) x = rng.normal();
      embeddings.add(u.id(), e);
    }
  }
  FeatureResources view() const { return {&vectors, &lexicon, &embeddings}; }
};

std::vector<UserRecord> random_users(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<UserRecord> users;
  for (int i = 0; i < n; ++i) users.push_back(testing::random_user(rng, "u" + std::to_string(i)));
  return users;
}

TEST(Assemble, Widths) {
  const auto users = random_users(3, 1);
  const Resources res(users);
  const std::vector<Block> bd = {Block::kBasic, Block::kDynamic};
  const std::vector<Block> bdc = {Block::kContent, Block::kBasic, Block::kDynamic};
  const std::vector<Block> bdt = {Block::kBasic, Block::kDynamic, Block::kTransformer};
  EXPECT_EQ(total_width(bd), 134u);
  EXPECT_EQ(total_width(bdc), 434u);
  EXPECT_EQ(total_width(bdt), 646u);
  EXPECT_EQ(assemble(users[0], bd, res.view()).concat(bd).size(), 134u);
  EXPECT_EQ(assemble(users[0], bdc, res.view()).concat(bdc).size(), 434u);
  EXPECT_EQ(assemble(users[0], bdt, res.view()).concat(bdt).size(), 646u);
  EXPECT_EQ(blocks_label(bdc), "basic+dynamic+content");
}

TEST(Assemble, MissingResourcesAreErrors) {
  auto users = random_users(2, 3);
  const Resources res(users);
  const std::vector<Block> bdt = {Block::kBasic, Block::kDynamic, Block::kTransformer};
  users.push_back(testing::make_user("stranger"));
  EXPECT_THROW(assemble(users.back(), bdt, res.view()), ValidationError);
  EXPECT_THROW(assemble_all(users, bdt, res.view()), ValidationError);
  const std::vector<Block> content = {Block::kContent};
  EXPECT_THROW(assemble(users[0], content, FeatureResources{}), ValidationError);
}

TEST(Assemble, PropertiesOnRandomUsers) {
  const auto users = random_users(60, 9);
  const Resources res(users);
  const std::vector<Block> all(kAllBlocks.begin(), kAllBlocks.end());
  const auto rows = assemble_all(users, all, res.view(), 3);
  const auto again = assemble_all(users, all, res.view(), 1);
  Rng rng(10);
  for (std::size_t i = 0; i < users.size(); ++i) {
    EXPECT_EQ(rows[i].blocks, again[i].blocks);

    auto shuffled = users[i];
    rng.shuffle(std::span(shuffled.posts));
    EXPECT_EQ(assemble(shuffled, all, res.view()).blocks, rows[i].blocks);

    const auto& b = rows[i].blocks.at(Block::kBasic);
    for (std::size_t k : {11, 17, 18, 20, 21, 23, 25, 26, 32, 33, 34, 35, 36, 37, 38}) {
      EXPECT_GE(b[k], 0.0) << k;
      EXPECT_LE(b[k], 1.0) << k;
    }
    EXPECT_LE(b[kHourEntropy], std::log(24.0) + 1e-12);
    EXPECT_LE(b[kWeekdayEntropy], std::log(7.0) + 1e-12);
    for (double e : rows[i].blocks.at(Block::kEmotion)) {
      EXPECT_GE(e, 0.0);
      EXPECT_LE(e, 1.0);
    }
  }
}

TEST(FeatureCsv, RoundTrip) {
  const auto users = random_users(5, 12);
  const Resources res(users);
  const std::vector<Block> bs = {Block::kBasic, Block::kEmotion, Block::kDynamic};
  const auto rows = assemble_all(users, bs, res.view());
  std::stringstream ss;
  write_features_csv(rows, bs, ss);
  const auto table = read_features_csv(ss);
  EXPECT_EQ(table.blocks, canonical_blocks(bs));
  ASSERT_EQ(table.rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(table.rows[i].blocks, rows[i].blocks);
  EXPECT_NE(table.find("u3"), nullptr);
  EXPECT_EQ(features_schema(bs)["width"], 139);

  std::istringstream bad("user_id,basic_00,zzz\n");
  EXPECT_THROW(read_features_csv(bad), DataError);
}

}  // namespace
}  // namespace cyberaggr::features
