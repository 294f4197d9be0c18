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

// Seeded synthetic cohort: profiles, posts, survey answers, a word-vector
// table, an emotion lexicon and user embeddings. Labels come from the survey
// through the normal trisection; label-dependent signal can then be injected
// into the posting behaviour, the post vocabulary and the embeddings
// independently, each with its own strength in [0, 1].

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cyberaggr/data_model.hpp"
#include "cyberaggr/embedding_io.hpp"
#include "cyberaggr/errors.hpp"
#include "cyberaggr/features/emotion.hpp"
#include "cyberaggr/labeling.hpp"
#include "cyberaggr/rng.hpp"
#include "cyberaggr/timestamp.hpp"
#include "cyberaggr/utf8.hpp"

namespace cyberaggr::synth {

struct SynthOptions {
  std::size_t users = 320;
  std::size_t male_users = 74;
  std::uint64_t seed = 42;
  double behavior_signal = 0.5;
  double content_signal = 0.0;
  double transformer_signal = 0.0;
  std::size_t word_vector_dim = 300;

  void validate() const {
    if (users < 10) throw ValidationError("synth needs at least 10 users");
    if (male_users > users) throw ValidationError("male_users exceeds users");
    for (double s : {behavior_signal, content_signal, transformer_signal}) {
      if (!(s >= 0.0 && s <= 1.0)) {
        throw ValidationError("signal strengths must lie in [0, 1]");
      }
    }
    if (word_vector_dim == 0) throw ValidationError("word_vector_dim must be > 0");
  }
};

struct SynthDataset {
  std::vector<UserRecord> users;
  std::vector<SurveyResponse> survey;
  CohortLabels labels;
  std::vector<std::pair<std::string, std::vector<double>>> word_vectors;
  std::vector<std::pair<std::string, features::Emotion>> lexicon;
  EmbeddingTable embeddings;
};

// Latent score distribution per target, in target order.
inline constexpr std::array<double, 3> kLatentMean = {2.44, 1.69, 2.03};
inline constexpr std::array<double, 3> kLatentSd = {1.11, 0.77, 1.02};

// UTC hour favoured by each (target, class) pair; all nine are distinct.
inline constexpr std::array<std::array<int, 3>, 3> kSignalHours = {
    {{1, 9, 17}, {3, 11, 19}, {5, 13, 21}}};

namespace detail {

inline std::string cjk_word(Rng& rng, int chars) {
  std::string w;
  for (int i = 0; i < chars; ++i) {
    utf8::append(w, static_cast<char32_t>(0x4E00 + rng.below(0x51A5)));
  }
  return w;
}

inline std::vector<std::string> unique_words(Rng& rng, std::size_t n,
                                             std::set<std::string>& taken) {
  std::vector<std::string> out;
  while (out.size() < n) {
    auto w = cjk_word(rng, 2 + static_cast<int>(rng.below(2)));
    if (taken.insert(w).second) out.push_back(std::move(w));
  }
  return out;
}

template <std::size_t N>
std::array<int, N> likert_items(Rng& rng, double score) {
  std::array<int, N> items{};
  for (auto& v : items) {
    const double x = std::round(score + rng.normal(0.0, 0.6));
    v = static_cast<int>(std::clamp(x, 1.0, 7.0));
  }
  return items;
}

}  // namespace detail

inline SynthDataset generate(const SynthOptions& opt) {
  opt.validate();
  Rng rng(opt.seed);
  SynthDataset ds;

  // Vocabulary: general words, signal words per (target, class), emotion
  // words and bracketed emoticons.
  std::set<std::string> taken;
  const auto general = detail::unique_words(rng, 600, taken);
  std::array<std::array<std::vector<std::string>, 3>, 3> signal_words;
  for (auto& per_target : signal_words) {
    for (auto& words : per_target) words = detail::unique_words(rng, 6, taken);
  }
  std::array<std::vector<std::string>, 5> emotion_words;
  for (auto& words : emotion_words) words = detail::unique_words(rng, 6, taken);
  const std::array<std::string, 5> emoticons = {"[怒]", "[吐]", "[哈哈]", "[泪]",
                                                "[吃惊]"};
  for (std::size_t e = 0; e < 5; ++e) {
    const auto emo = static_cast<features::Emotion>(e);
    for (const auto& w : emotion_words[e]) ds.lexicon.emplace_back(w, emo);
    ds.lexicon.emplace_back(emoticons[e], emo);
  }
  auto add_vectors = [&](const std::vector<std::string>& words) {
    for (const auto& w : words) {
      std::vector<double> v(opt.word_vector_dim);
      for (auto& x : v) x = rng.normal();
      ds.word_vectors.emplace_back(w, std::move(v));
    }
  };
  add_vectors(general);
  for (const auto& per_target : signal_words) {
    for (const auto& words : per_target) add_vectors(words);
  }
  for (const auto& words : emotion_words) add_vectors(words);

  // Profiles and survey answers.
  std::vector<Gender> genders(opt.users, Gender::kFemale);
  std::fill_n(genders.begin(), opt.male_users, Gender::kMale);
  rng.shuffle(std::span(genders));
  std::vector<std::pair<std::string, AggressionScores>> scores;
  for (std::size_t i = 0; i < opt.users; ++i) {
    std::string id = std::to_string(i + 1);
    id = "u" + std::string(id.size() < 4 ? 4 - id.size() : 0, '0') + id;
    UserRecord u;
    u.profile.user_id = id;
    u.profile.gender = genders[i];
    u.profile.verified = rng.bernoulli(0.05);
    u.profile.follower_count =
        static_cast<std::int64_t>(std::exp(rng.normal(5.0, 1.5)));
    u.profile.followee_count =
        static_cast<std::int64_t>(std::exp(rng.normal(5.0, 1.0)));
    if (rng.bernoulli(0.7)) {
      for (int k = 0, n = 1 + static_cast<int>(rng.below(4)); k < n; ++k) {
        u.profile.description += general[rng.below(general.size())];
      }
    }
    ds.users.push_back(std::move(u));

    SurveyResponse r;
    r.user_id = id;
    r.social_exclusion = detail::likert_items<kSocialExclusionItems>(
        rng, rng.normal(kLatentMean[0], kLatentSd[0]));
    r.malicious_humour = detail::likert_items<kMaliciousHumourItems>(
        rng, rng.normal(kLatentMean[1], kLatentSd[1]));
    r.guilt_induction = detail::likert_items<kGuiltInductionItems>(
        rng, rng.normal(kLatentMean[2], kLatentSd[2]));
    scores.emplace_back(r.user_id, score_survey(r));
    ds.survey.push_back(std::move(r));
  }
  ds.labels = label_cohort(scores);

  // Posts.
  using namespace std::chrono;
  const sys_days first_start = 2020y / January / 1;
  const double b = opt.behavior_signal;
  for (std::size_t i = 0; i < opt.users; ++i) {
    UserRecord& u = ds.users[i];
    const LabelSet& ls = ds.labels.labels[i];
    const auto start = first_start + days(rng.below(182));
    const auto span = 45 + static_cast<int>(rng.below(156));
    const auto n_posts = 21 + static_cast<int>(rng.below(100));
    const double p_picture = 0.25 + 0.15 * b * ls[Target::kSocialExclusion];
    const double p_mention = 0.30 + 0.15 * b * ls[Target::kMaliciousHumour];
    const double p_retweet = 0.25 + 0.15 * b * ls[Target::kGuiltInduction];
    for (int k = 0; k < n_posts; ++k) {
      int day = static_cast<int>(rng.below(static_cast<std::uint64_t>(span)));
      if (k == 0) day = 0;
      if (k == 1) day = span - 1;
      int hour = static_cast<int>(rng.below(24));
      if (rng.bernoulli(0.45 * b)) {
        const auto t = rng.below(3);
        hour = kSignalHours[t][class_index(ls.labels[t])];
      }
      Post p;
      p.timestamp = sys_seconds(start + days(day)) + hours(hour) +
                    minutes(rng.below(60)) + seconds(rng.below(60));
      p.has_picture = rng.bernoulli(p_picture);
      p.is_retweet = rng.bernoulli(p_retweet);
      std::string text;
      if (rng.bernoulli(p_mention)) {
        text += "@u" + std::to_string(1 + rng.below(opt.users)) + " ";
      }
      if (p.is_retweet) text += "//@u" + std::to_string(1 + rng.below(opt.users)) + ": ";
      const int words = 3 + static_cast<int>(rng.below(10));
      for (int w = 0; w < words; ++w) {
        if (rng.bernoulli(0.3 * opt.content_signal)) {
          const auto t = rng.below(3);
          const auto& pool = signal_words[t][class_index(ls.labels[t])];
          text += pool[rng.below(pool.size())];
        } else {
          text += general[rng.below(general.size())];
        }
      }
      if (rng.bernoulli(0.25)) {
        const auto e = rng.below(5);
        text += rng.bernoulli(0.5) ? emoticons[e]
                                   : emotion_words[e][rng.below(6)];
      }
      if (rng.bernoulli(0.1)) text += "#" + general[rng.below(general.size())] + "#";
      if (rng.bernoulli(0.05)) text += " http://t.cn/" + std::to_string(rng.below(100000));
      if (rng.bernoulli(0.15)) text += rng.bernoulli(0.5) ? "！" : "？";
      p.text = std::move(text);
      p.mention_count = count_mentions(p.text);
      p.hashtag_count = count_hashtags(p.text);
      p.url_count = count_urls(p.text);
      p.emoticon_tokens = extract_emoticons(p.text);
      u.posts.push_back(std::move(p));
    }
    sort_posts(u.posts);
    for (std::size_t k = 0; k < u.posts.size(); ++k) {
      u.posts[k].post_id = u.id() + "_" + std::to_string(k + 1);
    }
  }

  // Embeddings: noise plus a class-mean direction per target.
  ds.embeddings = EmbeddingTable(kEmbeddingDim, "synthetic-v1");
  std::array<std::array<std::vector<double>, 3>, 3> class_means;
  for (auto& per_target : class_means) {
    for (auto& mean : per_target) {
      mean.resize(kEmbeddingDim);
      for (auto& x : mean) x = rng.normal();
    }
  }
  const double s = 0.2 * opt.transformer_signal;
  for (std::size_t i = 0; i < opt.users; ++i) {
    std::vector<double> v(kEmbeddingDim);
    for (auto& x : v) x = rng.normal();
    for (std::size_t t = 0; t < 3; ++t) {
      const auto& mean = class_means[t][class_index(ds.labels.labels[i].labels[t])];
      for (std::size_t d = 0; d < kEmbeddingDim; ++d) v[d] += s * mean[d];
    }
    ds.embeddings.add(ds.users[i].id(), v);
  }
  return ds;
}

}  // namespace cyberaggr::synth
