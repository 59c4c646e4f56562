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

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "ssoid/sieve.hpp"
#include "support/testing.hpp"

namespace ssoid {
namespace {

using testing::Rng;
using Sieve = SieveInstance<CoverageOracle>;

TEST(Sieve, NewInstanceIsEmpty) {
  Sieve s(10, 0.1);
  EXPECT_EQ(s.live_thresholds(), 0u);
  EXPECT_EQ(s.max_singleton(), 0.0);
  const auto best = s.best();
  EXPECT_TRUE(best.members.empty());
  EXPECT_EQ(best.value, 0.0);
}

TEST(Sieve, RejectsInvalidParameters) {
  EXPECT_THROW(Sieve(0, 0.1), ConfigError);
  EXPECT_THROW(Sieve(3, 0.0), ConfigError);
  EXPECT_THROW(Sieve(3, 1.0), ConfigError);
}

TEST(Sieve, SingleElementSpansThresholdWindow) {
  Sieve s(1, 0.5);
  CoverageOracle oracle;
  const auto v = make_element("v", 0, 1, {0, 1, 2, 3});
  s.process(v, oracle);
  ASSERT_GT(s.live_thresholds(), 0u);
  for (const auto& [j, cand] : s.candidates()) {
    EXPECT_GE(s.threshold(j), 4.0);
    EXPECT_LE(s.threshold(j), 8.0);
    EXPECT_EQ(testing::ids_of(cand.members), (std::vector<std::string>{"v"}));
  }
  EXPECT_EQ(s.best().value, 4.0);
  EXPECT_EQ(testing::ids_of(s.best().members), (std::vector<std::string>{"v"}));
}

TEST(Sieve, HandTracedThresholdRule) {
  // k = 2, covers {a,b}, {a,b}, {c}. The second copy has zero gain and only
  // enters sets that already reach tau/2; the guess tau in (4, 6] keeps room
  // for {c}.
  Sieve s(2, 0.1);
  CoverageOracle oracle;
  const std::vector<ElementPtr> stream{make_element("x", 0, 1, {0, 1}),
                                       make_element("y", 0, 1, {0, 1}),
                                       make_element("z", 0, 1, {2})};
  for (const auto& e : stream) s.process(e, oracle);
  EXPECT_EQ(s.best().value, 3.0);
  EXPECT_GE(s.best().value, (0.5 - 0.1) * testing::brute_force_opt(stream, 2));
}

TEST(Sieve, GainEqualToThresholdIsAccepted) {
  // f({v}) = tau_7 / 2 with k = 1: the window tops out exactly at
  // 2m = tau_7, whose acceptance bar tau_7 / 2 equals the gain.
  const double eps = 0.25;
  const double tau7 = std::pow(1.0 + eps, 7);
  FunctionOracle oracle([&](std::span<const Element* const> set) {
    return set.empty() ? 0.0 : tau7 / 2.0;
  });
  SieveInstance<FunctionOracle> s(1, eps);
  s.process(make_element("v", 0, 1, {0}), oracle);
  ASSERT_TRUE(s.candidates().contains(7));
  EXPECT_EQ(s.candidates().rbegin()->first, 7);
  EXPECT_EQ(s.candidates().at(7).members.size(), 1u);
}

TEST(Sieve, HalfApproximationOnSubsampledInstances) {
  Rng rng(200);
  auto pool = testing::random_elements(rng, 200, 60, 8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ElementPtr> sample;
    std::sample(pool.begin(), pool.end(), std::back_inserter(sample), 20, rng);
    std::shuffle(sample.begin(), sample.end(), rng);
    const double opt = testing::brute_force_opt(sample, 5);
    EXPECT_GE(testing::fresh_sieve_value(sample, 5, 0.1), (0.5 - 0.1) * opt);
  }
}

TEST(Sieve, HalfApproximationProperty) {
  Rng rng(31337);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = testing::uniform(rng, 1, 20);
    const int k = testing::uniform(rng, 1, 4);
    const double eps = trial % 2 ? 0.1 : 0.2;
    auto elems = testing::random_elements(rng, n, testing::uniform(rng, 5, 40), 7);
    const double opt = testing::brute_force_opt(elems, k);
    EXPECT_GE(testing::fresh_sieve_value(elems, k, eps), (0.5 - eps) * opt)
        << "trial " << trial;
  }
}

TEST(Sieve, BestIsEmptyThenSingleton) {
  Sieve s(3, 0.2);
  CoverageOracle oracle;
  EXPECT_EQ(s.best().value, 0.0);
  const auto v = make_element("v", 0, 1, {5, 6});
  s.process(v, oracle);
  EXPECT_EQ(s.best().value, 2.0);
  EXPECT_EQ(testing::ids_of(s.best().members), (std::vector<std::string>{"v"}));
}

TEST(Sieve, TiesGoToLowestExponent) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    Sieve s(2, 0.2);
    CoverageOracle oracle;
    for (const auto& e : testing::random_elements(rng, 6, 6, 3)) s.process(e, oracle);
    const double best = s.best().value;
    const auto* first = static_cast<const Sieve::CandidateSet*>(nullptr);
    for (const auto& [j, cand] : s.candidates())
      if (CoverageOracle::value(cand.state) == best) {
        first = &cand;
        break;
      }
    if (first == nullptr) continue;  // best is the retired snapshot
    EXPECT_EQ(testing::ids_of(s.best().members), testing::ids_of(first->members));
  }
}

TEST(Sieve, CopyIsIndependent) {
  Rng rng(4);
  Sieve original(3, 0.1);
  CoverageOracle oracle;
  for (const auto& e : testing::random_elements(rng, 8, 30, 5)) original.process(e, oracle);
  const auto before = original.best();
  Sieve copy = original;
  EXPECT_EQ(copy.best().value, before.value);
  EXPECT_EQ(testing::ids_of(copy.best().members), testing::ids_of(before.members));
  for (const auto& e : testing::random_elements(rng, 10, 30, 9, 0, 1, 100))
    copy.process(e, oracle);
  EXPECT_EQ(original.best().value, before.value);
  EXPECT_EQ(testing::ids_of(original.best().members), testing::ids_of(before.members));
  EXPECT_EQ(original.fed_count(), 8u);
  EXPECT_EQ(copy.fed_count(), 18u);

  Sieve empty(2, 0.3);
  Sieve empty_copy = empty;
  EXPECT_EQ(empty_copy.live_thresholds(), 0u);
  EXPECT_EQ(empty_copy.best().value, 0.0);
}

TEST(Sieve, CandidateCachesMatchRecomputation) {
  Rng rng(21);
  Sieve s(4, 0.15);
  CoverageOracle oracle;
  for (const auto& e : testing::random_elements(rng, 60, 50, 6)) {
    s.process(e, oracle);
    for (const auto& [j, cand] : s.candidates()) {
      ASSERT_LE(cand.members.size(), 4u);
      ASSERT_EQ(CoverageOracle::value(cand.state), testing::coverage(cand.members));
    }
  }
}

TEST(Sieve, SuffixMonotonicity) {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = testing::uniform(rng, 1, 5);
    Sieve s(k, trial % 3 == 0 ? 0.3 : 0.1);
    CoverageOracle oracle;
    double previous = 0.0;
    for (const auto& e : testing::random_elements(rng, 40, testing::uniform(rng, 5, 40), 9)) {
      s.process(e, oracle);
      ASSERT_GE(s.best_value(), previous) << "trial " << trial;
      previous = s.best_value();
    }
  }
}

TEST(Sieve, IdenticalOrderGivesIdenticalCandidates) {
  Rng rng(17);
  auto stream = testing::random_elements(rng, 50, 30, 6);
  Sieve a(3, 0.1), b(3, 0.1);
  CoverageOracle oa, ob;
  for (const auto& e : stream) a.process(e, oa);
  for (const auto& e : stream) b.process(e, ob);
  ASSERT_EQ(a.candidates().size(), b.candidates().size());
  for (auto ia = a.candidates().begin(), ib = b.candidates().begin();
       ia != a.candidates().end(); ++ia, ++ib) {
    EXPECT_EQ(ia->first, ib->first);
    EXPECT_EQ(testing::ids_of(ia->second.members), testing::ids_of(ib->second.members));
  }
  EXPECT_EQ(oa.calls(), ob.calls());
}

TEST(Sieve, LiveThresholdCountIsBounded) {
  Rng rng(55);
  for (int k : {1, 2, 5, 10, 50}) {
    for (double eps : {0.05, 0.1, 0.2, 0.5}) {
      Sieve s(k, eps);
      CoverageOracle oracle;
      const auto bound = static_cast<std::size_t>(std::ceil(std::log(2.0 * k) / std::log1p(eps))) + 1;
      EXPECT_EQ(s.threshold_budget(), bound);
      for (const auto& e : testing::random_elements(rng, 80, 200, 40)) {
        s.process(e, oracle);
        ASSERT_LE(s.live_thresholds(), bound) << "k=" << k << " eps=" << eps;
        if (s.max_singleton() > 0)
          for (const auto& [j, cand] : s.candidates()) {
            ASSERT_GE(s.threshold(j), s.max_singleton());
            ASSERT_LE(s.threshold(j), 2.0 * k * s.max_singleton());
          }
      }
    }
  }
}

TEST(Sieve, GenericOracleWithinRelativeTolerance) {
  // Concave-of-coverage objective; compare cached values with direct
  // evaluation.
  auto f = [](std::span<const Element* const> set) {
    std::set<ItemId> items;
    for (const Element* e : set) items.insert(e->cover.begin(), e->cover.end());
    return std::log1p(static_cast<double>(items.size()));
  };
  FunctionOracle oracle(f);
  SieveInstance<FunctionOracle> s(3, 0.1);
  Rng rng(6);
  for (const auto& e : testing::random_elements(rng, 40, 30, 6)) s.process(e, oracle);
  const auto best = s.best();
  std::vector<const Element*> raw;
  for (const auto& m : best.members) raw.push_back(m.get());
  EXPECT_NEAR(best.value, f(raw), 1e-9 * std::max(1.0, f(raw)));
}

TEST(Sieve, ZeroValueElementsCreateNoThresholds) {
  Sieve s(2, 0.1);
  CoverageOracle oracle;
  s.process(make_element("empty", 0, 1, {}), oracle);
  EXPECT_EQ(s.live_thresholds(), 0u);
  EXPECT_EQ(s.fed_count(), 1u);
}

}  // namespace
}  // namespace ssoid
