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

#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cyberaggr/embedding_io.hpp"
#include "fixtures.hpp"

namespace cyberaggr {
namespace {

std::string row(const std::string& id, std::size_t n, double base) {
  std::string s = id;
  for (std::size_t i = 0; i < n; ++i) s += "\t" + std::to_string(base + 0.001 * i);
  return s + "\n";
}

const std::string kHeader = "#dim=512\tmodel=encoder-x\n";

TEST(Embeddings, LoadsThreeUsers) {
  std::istringstream in(kHeader + row("a", 512, 1) + row("b", 512, 2) + row("c", 512, 3));
  const auto t = load_embeddings(in);
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(t.dimension(), kEmbeddingDim);
  EXPECT_EQ(t.provenance(), "encoder-x");
  EXPECT_DOUBLE_EQ((*t.find("b"))[1], 2.001);
  EXPECT_FALSE(t.find("d"));
}

TEST(Embeddings, ShortRowNamesLine) {
  std::istringstream in(kHeader + row("a", 512, 1) + row("b", 511, 2));
  try {
    load_embeddings(in);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Embeddings, MalformedInputs) {
  const std::vector<std::string> cases = {
      "", "a\t1\n", "#dim=2\n", "#dim=2\tmodel=m\na\t1\tx\n",
      "#dim=2\tmodel=m\na\t1\t2\na\t3\t4\n", "#dim=2\tmodel=m\n\t1\t2\n"};
  for (const auto& text : cases) {
    std::istringstream in(text);
    EXPECT_THROW(load_embeddings(in), DataError) << text;
  }
}

TEST(Embeddings, RoundTrip) {
  Rng rng(6);
  EmbeddingTable t(kEmbeddingDim, "m1");
  std::vector<double> v(kEmbeddingDim);
  for (int u = 0; u < 4; ++u) {
    for (auto& x : v) x = rng.normal() * 1e3;
    t.add("user" + std::to_string(u), v);
  }
  std::stringstream ss;
  write_embeddings(t, ss);
  const auto back = load_embeddings(ss);
  ASSERT_EQ(back.ids(), t.ids());
  EXPECT_EQ(back.provenance(), "m1");
  for (const auto& id : t.ids()) {
    const auto a = *t.find(id);
    const auto b = *back.find(id);
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
  }
}

TEST(Embeddings, JoinReportsMissingAndUnused) {
  EmbeddingTable t(2, "m");
  t.add("a", std::vector<double>{1, 2});
  t.add("z", std::vector<double>{3, 4});
  const auto cov = join_embeddings({testing::make_user("a"), testing::make_user("b")}, t);
  EXPECT_EQ(cov.missing, std::vector<std::string>{"b"});
  EXPECT_EQ(cov.unused, std::vector<std::string>{"z"});
  EXPECT_FALSE(cov.complete());
  EXPECT_THROW(t.add("q", std::vector<double>{1}), ValidationError);
  EXPECT_THROW(t.add("a", std::vector<double>{1, 2}), ValidationError);
}

}  // namespace
}  // namespace cyberaggr
