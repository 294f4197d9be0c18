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

#include <array>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cyberaggr/csv.hpp"
#include "cyberaggr/errors.hpp"
#include "cyberaggr/label.hpp"

namespace cyberaggr {

// Indirect Aggression Scale (aggressor version) item counts per subscale.
inline constexpr int kSocialExclusionItems = 10;
inline constexpr int kMaliciousHumourItems = 9;
inline constexpr int kGuiltInductionItems = 6;
inline constexpr int kLikertMin = 1;
inline constexpr int kLikertMax = 7;

struct SurveyResponse {
  std::string user_id;
  std::array<int, kSocialExclusionItems> social_exclusion{};
  std::array<int, kMaliciousHumourItems> malicious_humour{};
  std::array<int, kGuiltInductionItems> guilt_induction{};
};

struct AggressionScores {
  double social_exclusion = 0.0;
  double malicious_humour = 0.0;
  double guilt_induction = 0.0;

  double operator[](Target t) const {
    switch (t) {
      case Target::kSocialExclusion:
        return social_exclusion;
      case Target::kMaliciousHumour:
        return malicious_humour;
      case Target::kGuiltInduction:
        return guilt_induction;
    }
    return 0.0;
  }
};

namespace detail {

template <std::size_t N>
double subscale_mean(const std::array<int, N>& items, std::string_view name) {
  int sum = 0;
  for (std::size_t i = 0; i < N; ++i) {
    if (items[i] < kLikertMin || items[i] > kLikertMax) {
      throw ValidationError(std::string(name) + " item " +
                            std::to_string(i + 1) + " out of [1,7]: " +
                            std::to_string(items[i]));
    }
    sum += items[i];
  }
  return static_cast<double>(sum) / static_cast<double>(N);
}

}  // namespace detail

/// Subscale scores are the plain means of their items.
inline AggressionScores score_survey(const SurveyResponse& resp) {
  return {detail::subscale_mean(resp.social_exclusion, "se"),
          detail::subscale_mean(resp.malicious_humour, "mh"),
          detail::subscale_mean(resp.guilt_induction, "gi")};
}

struct TrisectionThresholds {
  Target target = Target::kSocialExclusion;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation
  double lo = 0.0;  // mean - sd/2
  double hi = 0.0;  // mean + sd/2
};

inline TrisectionThresholds fit_thresholds(std::span<const double> scores,
                                           Target target) {
  if (scores.size() < 2) {
    throw ValidationError("fit_thresholds needs at least 2 scores");
  }
  double sum = 0.0;
  for (double s : scores) sum += s;
  const double n = static_cast<double>(scores.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (double s : scores) ss += (s - mean) * (s - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return {target, mean, sd, mean - sd / 2.0, mean + sd / 2.0};
}

/// Closed neutral interval: boundary scores are labeled 0.
inline Label assign_label(double score, const TrisectionThresholds& th) {
  if (score > th.hi) return 1;
  if (score < th.lo) return -1;
  return 0;
}

struct GroupCounts {
  std::size_t high = 0;
  std::size_t neutral = 0;
  std::size_t low = 0;
};

struct LabelSet {
  std::string user_id;
  std::array<Label, 3> labels{};  // indexed by Target

  Label operator[](Target t) const {
    return labels[static_cast<std::size_t>(t)];
  }
};

struct CohortLabels {
  std::array<TrisectionThresholds, 3> thresholds;
  std::vector<LabelSet> labels;
  std::array<GroupCounts, 3> counts;
};

inline CohortLabels label_cohort(
    const std::vector<std::pair<std::string, AggressionScores>>& scores) {
  if (scores.size() < 2) {
    throw ValidationError("label_cohort needs at least 2 users");
  }
  CohortLabels out;
  out.labels.resize(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out.labels[i].user_id = scores[i].first;
  }
  for (Target t : kAllTargets) {
    const auto ti = static_cast<std::size_t>(t);
    std::vector<double> col;
    col.reserve(scores.size());
    for (const auto& [id, s] : scores) col.push_back(s[t]);
    out.thresholds[ti] = fit_thresholds(col, t);
    GroupCounts& c = out.counts[ti];
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const Label l = assign_label(col[i], out.thresholds[ti]);
      out.labels[i].labels[ti] = l;
      (l > 0 ? c.high : l < 0 ? c.low : c.neutral)++;
    }
  }
  return out;
}

// Survey CSV: user_id,se1..se10,mh1..mh9,gi1..gi6.

inline std::vector<std::string> survey_header() {
  std::vector<std::string> h{"user_id"};
  for (int i = 1; i <= kSocialExclusionItems; ++i) h.push_back("se" + std::to_string(i));
  for (int i = 1; i <= kMaliciousHumourItems; ++i) h.push_back("mh" + std::to_string(i));
  for (int i = 1; i <= kGuiltInductionItems; ++i) h.push_back("gi" + std::to_string(i));
  return h;
}

/// Reads the survey CSV. Rows must have exactly the header's columns and
/// integer items; any violation is a DataError naming the line.
inline std::vector<SurveyResponse> read_survey_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("survey CSV is empty");
  const auto header = csv::split(csv::trim_cr(line));
  if (header != survey_header()) {
    throw DataError("survey CSV header must be user_id,se1..se10,mh1..mh9,gi1..gi6");
  }
  std::vector<SurveyResponse> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto trimmed = csv::trim_cr(line);
    if (trimmed.empty()) continue;
    const auto f = csv::split(trimmed);
    if (f.size() != header.size()) {
      throw DataError("survey CSV line " + std::to_string(lineno) + ": expected " +
                      std::to_string(header.size()) + " fields");
    }
    SurveyResponse r;
    r.user_id = f[0];
    if (r.user_id.empty()) {
      throw DataError("survey CSV line " + std::to_string(lineno) + ": empty user_id");
    }
    std::size_t col = 1;
    auto fill = [&](auto& items) {
      for (auto& item : items) {
        auto v = csv::to_int(f[col]);
        if (!v) {
          throw DataError("survey CSV line " + std::to_string(lineno) +
                          ": non-integer item in column " + header[col]);
        }
        item = static_cast<int>(*v);
        ++col;
      }
    };
    fill(r.social_exclusion);
    fill(r.malicious_humour);
    fill(r.guilt_induction);
    out.push_back(std::move(r));
  }
  return out;
}

inline void write_survey_csv(const std::vector<SurveyResponse>& rows,
                             std::ostream& out) {
  const auto h = survey_header();
  for (std::size_t i = 0; i < h.size(); ++i) out << (i ? "," : "") << h[i];
  out << "\n";
  for (const auto& r : rows) {
    out << csv::escape(r.user_id);
    for (int v : r.social_exclusion) out << "," << v;
    for (int v : r.malicious_humour) out << "," << v;
    for (int v : r.guilt_induction) out << "," << v;
    out << "\n";
  }
}

// Labels CSV: user_id,se_label,mh_label,gi_label.

inline void write_labels_csv(const std::vector<LabelSet>& labels,
                             std::ostream& out) {
  out << "user_id,se_label,mh_label,gi_label\n";
  for (const auto& l : labels) {
    out << csv::escape(l.user_id) << "," << l.labels[0] << "," << l.labels[1]
        << "," << l.labels[2] << "\n";
  }
}

inline std::vector<LabelSet> read_labels_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      csv::trim_cr(line) != "user_id,se_label,mh_label,gi_label") {
    throw DataError("labels CSV header must be user_id,se_label,mh_label,gi_label");
  }
  std::vector<LabelSet> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto trimmed = csv::trim_cr(line);
    if (trimmed.empty()) continue;
    const auto f = csv::split(trimmed);
    if (f.size() != 4) {
      throw DataError("labels CSV line " + std::to_string(lineno) + ": expected 4 fields");
    }
    LabelSet ls;
    ls.user_id = f[0];
    for (int k = 0; k < 3; ++k) {
      auto v = csv::to_int(f[k + 1]);
      if (!v || !is_label(*v)) {
        throw DataError("labels CSV line " + std::to_string(lineno) +
                        ": label must be -1, 0 or 1");
      }
      ls.labels[k] = static_cast<Label>(*v);
    }
    out.push_back(std::move(ls));
  }
  return out;
}

inline nlohmann::json thresholds_to_json(const CohortLabels& c) {
  nlohmann::json j = nlohmann::json::object();
  for (Target t : kAllTargets) {
    const auto ti = static_cast<std::size_t>(t);
    const auto& th = c.thresholds[ti];
    const auto& n = c.counts[ti];
    j[std::string(target_name(t))] = {
        {"mean", th.mean}, {"sd", th.sd},     {"lo", th.lo},
        {"hi", th.hi},     {"high", n.high}, {"neutral", n.neutral},
        {"low", n.low}};
  }
  return j;
}

}  // namespace cyberaggr
