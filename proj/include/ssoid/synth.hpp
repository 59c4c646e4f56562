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

#pragma once

// Synthetic coverage streams: n elements per step (or Poisson(rate)), each
// covering c items drawn without replacement from a universe of size U, with
// lifespans from a LifespanGenerator.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssoid/element.hpp"
#include "ssoid/errors.hpp"
#include "ssoid/stream.hpp"

namespace ssoid {

struct CoverSizeDistribution {
  enum class Kind { kConstant, kUniform };
  Kind kind = Kind::kConstant;
  int min = 10;  // constant value when kind == kConstant
  int max = 10;
};

struct SynthSpec {
  int n_per_step = 20;
  std::optional<double> rate;  // Poisson arrivals; overrides n_per_step
  Timestamp T = 100;
  double p = 0.01;
  Timestamp L = 1000;
  std::size_t cover_universe_size = 1000;
  CoverSizeDistribution cover_size_distribution;
  std::uint64_t seed = 1;
};

inline void validate(const SynthSpec& s) {
  if (s.n_per_step < 0) throw ConfigError("synth: n_per_step must be >= 0");
  if (s.rate && !(*s.rate >= 0.0)) throw ConfigError("synth: rate must be >= 0");
  if (s.T < 1) throw ConfigError("synth: T must be >= 1");
  if (!(s.p > 0.0 && s.p < 1.0)) throw ConfigError("synth: need 0 < p < 1");
  if (s.L < 1) throw ConfigError("synth: L must be >= 1");
  if (s.cover_universe_size < 1)
    throw ConfigError("synth: cover_universe_size must be >= 1");
  const auto& c = s.cover_size_distribution;
  if (c.min < 0 || c.max < c.min ||
      static_cast<std::size_t>(c.max) > s.cover_universe_size)
    throw ConfigError("synth: cover sizes must satisfy 0 <= min <= max <= universe");
}

inline SynthSpec synth_spec_from_json(const nlohmann::json& j,
                                      SynthSpec defaults = {}) {
  SynthSpec s = defaults;
  try {
    if (j.contains("n_per_step")) s.n_per_step = j.at("n_per_step").get<int>();
    if (j.contains("rate")) s.rate = j.at("rate").get<double>();
    if (j.contains("T")) s.T = j.at("T").get<Timestamp>();
    if (j.contains("p")) s.p = j.at("p").get<double>();
    if (j.contains("L")) s.L = j.at("L").get<Timestamp>();
    if (j.contains("cover_universe_size"))
      s.cover_universe_size = j.at("cover_universe_size").get<std::size_t>();
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("cover_size_distribution")) {
      const auto& c = j.at("cover_size_distribution");
      auto& d = s.cover_size_distribution;
      const auto kind = c.value("kind", std::string("constant"));
      if (kind == "constant") {
        d.kind = CoverSizeDistribution::Kind::kConstant;
        d.min = d.max = c.at("value").get<int>();
      } else if (kind == "uniform") {
        d.kind = CoverSizeDistribution::Kind::kUniform;
        d.min = c.at("min").get<int>();
        d.max = c.at("max").get<int>();
      } else {
        throw ConfigError("synth: unknown cover_size_distribution kind '" + kind + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("synth: ") + e.what());
  }
  validate(s);
  return s;
}

inline nlohmann::json to_json(const SynthSpec& s) {
  nlohmann::json j;
  j["n_per_step"] = s.n_per_step;
  if (s.rate) j["rate"] = *s.rate;
  j["T"] = s.T;
  j["p"] = s.p;
  j["L"] = s.L;
  j["cover_universe_size"] = s.cover_universe_size;
  const auto& c = s.cover_size_distribution;
  if (c.kind == CoverSizeDistribution::Kind::kConstant)
    j["cover_size_distribution"] = {{"kind", "constant"}, {"value", c.min}};
  else
    j["cover_size_distribution"] = {{"kind", "uniform"}, {"min", c.min}, {"max", c.max}};
  j["seed"] = s.seed;
  return j;
}

// Element ids are zero-padded arrival sequence numbers, so id order matches
// stream order. Item names are "i<index>" and interned into `dict`.
inline std::vector<ElementPtr> generate_stream(const SynthSpec& spec,
                                               ItemDictionary& dict) {
  validate(spec);
  std::mt19937_64 rng(spec.seed);
  LifespanGenerator lifespans(GeometricLifespan{spec.p, spec.L},
                              spec.seed ^ 0x9e3779b97f4a7c15ULL);
  const auto universe = spec.cover_universe_size;
  std::vector<ItemId> ids(universe);
  for (std::size_t i = 0; i < universe; ++i)
    ids[i] = dict.intern("i" + std::to_string(i));

  std::uniform_int_distribution<std::size_t> pick(0, universe - 1);
  std::uniform_int_distribution<int> size_dist(spec.cover_size_distribution.min,
                                               spec.cover_size_distribution.max);
  std::vector<ElementPtr> out;
  std::uint64_t seq = 0;
  char name[32];
  for (Timestamp t = 1; t <= spec.T; ++t) {
    int n = spec.n_per_step;
    if (spec.rate) n = std::poisson_distribution<int>(*spec.rate)(rng);
    for (int i = 0; i < n; ++i) {
      const int c = size_dist(rng);
      std::unordered_set<std::size_t> chosen;
      std::vector<ItemId> cover;
      while (static_cast<int>(cover.size()) < c) {
        const auto item = pick(rng);
        if (chosen.insert(item).second) cover.push_back(ids[item]);
      }
      std::snprintf(name, sizeof(name), "v%08llu",
                    static_cast<unsigned long long>(seq++));
      out.push_back(make_element(name, t, lifespans.draw(), std::move(cover)));
    }
  }
  return out;
}

}  // namespace ssoid
