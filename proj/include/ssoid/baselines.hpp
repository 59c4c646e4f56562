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

// Reference solvers over an explicit active set: lazy Greedy, Random and
// exhaustive OPT.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ssoid/errors.hpp"
#include "ssoid/sieve.hpp"
#include "ssoid/utility.hpp"

namespace ssoid {

// Greedy with lazy evaluation. Each popped stale bound is refreshed with one
// gain query; an element is accepted once its bound is fresh for the current
// round. Ties go to the smaller element id. Stops early when the best gain
// is zero.
template <UtilityOracle O>
Solution greedy_select(std::span<const ElementPtr> elements, int k, O& oracle) {
  struct Bound {
    double gain;
    std::size_t index;
    std::size_t round;  // round the bound was computed in
  };
  auto worse = [&](const Bound& a, const Bound& b) {
    if (a.gain != b.gain) return a.gain < b.gain;
    return elements[a.index]->id > elements[b.index]->id;
  };
  std::priority_queue<Bound, std::vector<Bound>, decltype(worse)> heap(worse);

  Solution out;
  auto state = oracle.empty_state();
  for (std::size_t i = 0; i < elements.size(); ++i)
    heap.push({oracle.gain(state, *elements[i]), i, 0});

  std::size_t round = 0;
  while (static_cast<int>(out.members.size()) < k && !heap.empty()) {
    Bound top = heap.top();
    heap.pop();
    if (top.round == round) {
      if (top.gain <= 0.0) break;
      oracle.insert(state, *elements[top.index], top.gain);
      out.members.push_back(elements[top.index]);
      ++round;
      continue;
    }
    top.gain = oracle.gain(state, *elements[top.index]);
    top.round = round;
    heap.push(top);
  }
  out.value = O::value(state);
  return out;
}

// k elements sampled uniformly without replacement; the value costs one
// evaluate call.
template <UtilityOracle O>
Solution random_select(std::span<const ElementPtr> elements, int k,
                       std::uint64_t seed, O& oracle) {
  Solution out;
  if (k >= static_cast<int>(elements.size())) {
    out.members.assign(elements.begin(), elements.end());
  } else {
    std::mt19937_64 rng(seed);
    std::sample(elements.begin(), elements.end(),
                std::back_inserter(out.members), k, rng);
  }
  out.value = oracle.evaluate(out.members);
  return out;
}

// Number of subsets of size <= k of an n-set, saturating at `cap`.
inline std::uint64_t count_subsets(std::size_t n, int k, std::uint64_t cap) {
  std::uint64_t total = 0;
  double binom = 1.0;
  for (int s = 0; s <= k && static_cast<std::size_t>(s) <= n; ++s) {
    if (s > 0) binom = binom * static_cast<double>(n - s + 1) / s;
    total += static_cast<std::uint64_t>(std::min(std::round(binom), 1e19));
    if (total > cap) return cap + 1;
  }
  return total;
}

inline constexpr std::uint64_t kExactSubsetLimit = 10'000'000;

// Exhaustive max f(S) over |S| <= k. Ties resolve to the lexicographically
// smallest id sequence. Throws GuardError above kExactSubsetLimit subsets.
template <UtilityOracle O>
Solution exact_opt(std::span<const ElementPtr> elements, int k, O& oracle) {
  if (count_subsets(elements.size(), k, kExactSubsetLimit) > kExactSubsetLimit)
    throw GuardError("exact: C(" + std::to_string(elements.size()) + ", <=" +
                     std::to_string(k) + ") exceeds the subset limit");
  std::vector<ElementPtr> sorted(elements.begin(), elements.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a->id < b->id; });

  Solution best;
  std::vector<ElementPtr> current;
  std::vector<typename O::State> states{oracle.empty_state()};
  // Depth-first in lexicographic order; only strict improvements replace the
  // incumbent, so the first optimum found is the lexicographic minimum.
  auto search = [&](auto&& self, std::size_t from) -> void {
    const double value = O::value(states.back());
    if (value > best.value) best = {current, value};
    if (static_cast<int>(current.size()) == k) return;
    for (std::size_t i = from; i < sorted.size(); ++i) {
      auto next = states.back();
      oracle.insert(next, *sorted[i], oracle.gain(states.back(), *sorted[i]));
      states.push_back(std::move(next));
      current.push_back(sorted[i]);
      self(self, i + 1);
      current.pop_back();
      states.pop_back();
    }
  };
  search(search, 0);
  return best;
}

}  // namespace ssoid
