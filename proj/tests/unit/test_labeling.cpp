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
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cyberaggr/labeling.hpp"
#include "cyberaggr/rng.hpp"

namespace cyberaggr {
namespace {

SurveyResponse constant_response(int v) {
  SurveyResponse r;
  r.user_id = "u";
  r.social_exclusion.fill(v);
  r.malicious_humour.fill(v);
  r.guilt_induction.fill(v);
  return r;
}

// Two scores with mean m and sample SD s.
std::vector<double> pair_with(double m, double s) {
  return {m - s / std::sqrt(2.0), m + s / std::sqrt(2.0)};
}

TEST(ScoreSurvey, AllSevens) {
  const auto s = score_survey(constant_response(7));
  EXPECT_EQ(s.social_exclusion, 7.0);
  EXPECT_EQ(s.malicious_humour, 7.0);
  EXPECT_EQ(s.guilt_induction, 7.0);
}

TEST(ScoreSurvey, PlainMean) {
  auto r = constant_response(4);
  r.social_exclusion = {1, 2, 3, 4, 5, 6, 7, 1, 2, 3};
  EXPECT_DOUBLE_EQ(score_survey(r).social_exclusion, 3.4);
  EXPECT_DOUBLE_EQ(score_survey(r)[Target::kSocialExclusion], 3.4);
}

TEST(ScoreSurvey, OutOfRangeItemNamed) {
  auto r = constant_response(4);
  r.malicious_humour[2] = 8;
  try {
    score_survey(r);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("mh item 3"), std::string::npos) << e.what();
  }
  r = constant_response(4);
  r.guilt_induction[5] = 0;
  EXPECT_THROW(score_survey(r), ValidationError);
}

TEST(Thresholds, MeanPlusMinusHalfSd) {
  const auto p = pair_with(1.69, 0.77);
  const auto th = fit_thresholds(p, Target::kMaliciousHumour);
  EXPECT_NEAR(th.mean, 1.69, 1e-12);
  EXPECT_NEAR(th.sd, 0.77, 1e-12);
  EXPECT_NEAR(th.lo, 1.30, 0.01);
  EXPECT_NEAR(th.hi, 2.08, 0.01);

  const auto q = fit_thresholds(pair_with(2.44, 1.11), Target::kSocialExclusion);
  EXPECT_NEAR(q.lo, 1.88, 0.01);
  EXPECT_NEAR(q.hi, 3.00, 0.01);
}

TEST(Thresholds, ConstantList) {
  const std::vector<double> c(9, 3.25);
  const auto th = fit_thresholds(c, Target::kGuiltInduction);
  EXPECT_EQ(th.sd, 0.0);
  EXPECT_EQ(th.lo, 3.25);
  EXPECT_EQ(th.hi, 3.25);
  EXPECT_EQ(assign_label(3.25, th), 0);
}

TEST(Thresholds, NeedTwoScores) {
  EXPECT_THROW(fit_thresholds(std::vector<double>{}, Target::kGuiltInduction), ValidationError);
  EXPECT_THROW(fit_thresholds(std::vector<double>{1.0}, Target::kGuiltInduction),
               ValidationError);
}

TEST(AssignLabel, Examples) {
  TrisectionThresholds th;
  th.lo = 1.88;
  th.hi = 3.00;
  EXPECT_EQ(assign_label(3.5, th), 1);
  EXPECT_EQ(assign_label(3.00, th), 0);
  EXPECT_EQ(assign_label(1.88, th), 0);
  EXPECT_EQ(assign_label(1.87, th), -1);
}

TEST(AssignLabel, OneToFive) {
  const std::vector<double> s = {1, 2, 3, 4, 5};
  const auto th = fit_thresholds(s, Target::kSocialExclusion);
  EXPECT_NEAR(th.lo, 2.2094, 1e-4);
  EXPECT_NEAR(th.hi, 3.7906, 1e-4);
  std::vector<Label> got;
  for (double x : s) got.push_back(assign_label(x, th));
  EXPECT_EQ(got, (std::vector<Label>{-1, -1, 0, 1, 1}));
}

TEST(Trisection, RandomListProperties) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(60));
    std::vector<double> s(n);
    for (auto& x : s) x = 1.0 + 6.0 * rng.uniform();
    const auto th = fit_thresholds(s, Target::kSocialExclusion);

    long double mean = 0;
    for (double x : s) mean += x;
    mean /= n;
    long double ss = 0;
    for (double x : s) ss += (x - mean) * (x - mean);
    const double sd = static_cast<double>(std::sqrt(ss / (n - 1)));
    ASSERT_NEAR(th.lo, static_cast<double>(mean) - sd / 2, 1e-12);
    ASSERT_NEAR(th.hi, static_cast<double>(mean) + sd / 2, 1e-12);

    auto sorted = s;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      ASSERT_LE(assign_label(sorted[i - 1], th), assign_label(sorted[i], th));
    }
    // Doubling every score doubles the thresholds and keeps the labels.
    std::vector<double> d(s);
    for (auto& x : d) x *= 2;
    const auto th2 = fit_thresholds(d, Target::kSocialExclusion);
    for (int i = 0; i < n; ++i) ASSERT_EQ(assign_label(s[i], th), assign_label(d[i], th2));
  }
}

TEST(Cohort, CountsAndCsvRoundTrip) {
  std::vector<std::pair<std::string, AggressionScores>> scores;
  for (int i = 1; i <= 5; ++i) {
    scores.push_back({"u" + std::to_string(i), {double(i), double(6 - i), 2.0}});
  }
  const auto c = label_cohort(scores);
  EXPECT_EQ(c.counts[0].high, 2u);
  EXPECT_EQ(c.counts[0].neutral, 1u);
  EXPECT_EQ(c.counts[0].low, 2u);
  EXPECT_EQ(c.labels[0][Target::kSocialExclusion], -1);
  EXPECT_EQ(c.labels[0][Target::kMaliciousHumour], 1);
  EXPECT_EQ(c.counts[2].neutral, 5u);

  std::stringstream ss;
  write_labels_csv(c.labels, ss);
  const auto back = read_labels_csv(ss);
  ASSERT_EQ(back.size(), 5u);
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].user_id, c.labels[i].user_id);
    EXPECT_EQ(back[i].labels, c.labels[i].labels);
  }
  EXPECT_EQ(thresholds_to_json(c)["social_exclusion"]["high"], 2);
  EXPECT_THROW(label_cohort({scores[0]}), ValidationError);
}

TEST(SurveyCsv, RoundTripAndErrors) {
  std::vector<SurveyResponse> rows = {constant_response(3), constant_response(6)};
  rows[1].user_id = "v";
  rows[1].guilt_induction[0] = 1;
  std::stringstream ss;
  write_survey_csv(rows, ss);
  const auto back = read_survey_csv(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].guilt_induction, rows[1].guilt_induction);

  std::istringstream bad_header("id,se1\n");
  EXPECT_THROW(read_survey_csv(bad_header), DataError);
  std::stringstream short_row;
  write_survey_csv({}, short_row);
  short_row << "u,1,2\n";
  EXPECT_THROW(read_survey_csv(short_row), DataError);
}

}  // namespace
}  // namespace cyberaggr
