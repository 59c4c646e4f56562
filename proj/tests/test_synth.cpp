// Copyright 2026 The ssoid Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <set>
#include <string>
#include <vector>

#include "ssoid/synth.hpp"

namespace ssoid {
namespace {

SynthSpec small_spec() {
  SynthSpec s;
  s.n_per_step = 6;
  s.T = 40;
  s.p = 0.2;
  s.L = 9;
  s.cover_universe_size = 25;
  s.cover_size_distribution = {CoverSizeDistribution::Kind::kUniform, 2, 5};
  s.seed = 11;
  return s;
}

TEST(Synth, ShapeOfGeneratedStream) {
  ItemDictionary dict;
  const auto s = small_spec();
  const auto elems = generate_stream(s, dict);
  ASSERT_EQ(elems.size(), 6u * 40u);
  EXPECT_EQ(dict.size(), 25u);
  std::set<std::string> ids;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const auto& e = *elems[i];
    EXPECT_EQ(e.arrival, static_cast<Timestamp>(i / 6 + 1));
    EXPECT_GE(e.lifespan, 1);
    EXPECT_LE(e.lifespan, 9);
    EXPECT_GE(e.cover.size(), 2u);
    EXPECT_LE(e.cover.size(), 5u);
    EXPECT_TRUE(ids.insert(e.id).second);
    if (i > 0) {
      EXPECT_LT(elems[i - 1]->id, e.id);
    }
  }
}

TEST(Synth, ConstantCoverSize) {
  auto s = small_spec();
  s.cover_size_distribution = {CoverSizeDistribution::Kind::kConstant, 25, 25};
  ItemDictionary dict;
  for (const auto& e : generate_stream(s, dict)) EXPECT_EQ(e->cover.size(), 25u);
}

TEST(Synth, SeedDeterminesStream) {
  auto render = [](const SynthSpec& s) {
    ItemDictionary dict;
    std::string out;
    for (const auto& e : generate_stream(s, dict)) {
      out += e->id + ":" + std::to_string(e->lifespan) + ":";
      for (auto c : e->cover) out += dict.name(c) + ",";
    }
    return out;
  };
  auto s = small_spec();
  EXPECT_EQ(render(s), render(s));
  auto other = s;
  other.seed = 12;
  EXPECT_NE(render(s), render(other));
}

TEST(Synth, PoissonRate) {
  auto s = small_spec();
  s.rate = 3.0;
  s.T = 400;
  ItemDictionary dict;
  const double mean = static_cast<double>(generate_stream(s, dict).size()) / 400.0;
  EXPECT_NEAR(mean, 3.0, 0.3);
}

TEST(Synth, JsonRoundTripAndErrors) {
  const auto j = nlohmann::json::parse(R"({"n_per_step": 4, "T": 9, "p": 0.3, "L": 5,
      "cover_universe_size": 12, "cover_size_distribution": {"kind": "uniform", "min": 1, "max": 3},
      "seed": 8})");
  const auto s = synth_spec_from_json(j);
  EXPECT_EQ(s.n_per_step, 4);
  EXPECT_EQ(s.cover_size_distribution.max, 3);
  EXPECT_EQ(to_json(synth_spec_from_json(to_json(s))).dump(), to_json(s).dump());

  auto bad = [](const char* text) {
    return [text] { synth_spec_from_json(nlohmann::json::parse(text)); };
  };
  EXPECT_THROW(bad(R"({"p": 1.5})")(), ConfigError);
  EXPECT_THROW(bad(R"({"T": 0})")(), ConfigError);
  EXPECT_THROW(bad(R"({"cover_universe_size": 3,
      "cover_size_distribution": {"kind": "constant", "value": 4}})")(), ConfigError);
  EXPECT_THROW(bad(R"({"cover_size_distribution": {"kind": "zipf"}})")(), ConfigError);
  EXPECT_THROW(bad(R"({"n_per_step": "many"})")(), ConfigError);
}

}  // namespace
}  // namespace ssoid
