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

// SieveStreaming for insertion-only streams under a cardinality budget k.
//
// The instance tracks m, the largest singleton value seen, and keeps one
// candidate set per OPT guess tau_j = (1+eps)^j with m <= tau_j <= 2km.
// Guesses are instantiated lazily as m grows; guesses falling below m are
// dropped together with their candidate sets. An element v joins S_j when
// |S_j| < k and
//
//     gain(v | S_j) >= (tau_j / 2 - f(S_j)) / (k - |S_j|).

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "ssoid/element.hpp"
#include "ssoid/errors.hpp"
#include "ssoid/utility.hpp"

namespace ssoid {

struct Solution {
  std::vector<ElementPtr> members;
  double value = 0.0;
};

template <UtilityOracle O>
class SieveInstance {
 public:
  struct CandidateSet {
    std::vector<ElementPtr> members;
    typename O::State state;
  };

  SieveInstance(int k, double epsilon) : k_(k), epsilon_(epsilon) {
    if (k < 1) throw ConfigError("sieve: k must be >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0))
      throw ConfigError("sieve: epsilon must be in (0, 1)");
  }

  // Feeds one element whose singleton value f({v}) the caller already
  // computed. Gains against empty candidate sets reuse it, and full sets are
  // skipped, so those cost no oracle calls.
  void process(const ElementPtr& v, double singleton, O& oracle) {
    ++fed_count_;
    if (singleton > max_singleton_) {
      max_singleton_ = singleton;
      relattice(oracle);
    }
    for (auto& [j, cand] : candidates_) {
      const auto size = static_cast<int>(cand.members.size());
      if (size >= k_) continue;
      const double value = O::value(cand.state);
      const double need = (threshold(j) / 2.0 - value) / (k_ - size);
      const double gain = size == 0 ? singleton : oracle.gain(cand.state, *v);
      if (gain >= need) {
        oracle.insert(cand.state, *v, gain);
        cand.members.push_back(v);
      }
    }
  }

  void process(const ElementPtr& v, O& oracle) {
    process(v, singleton_value(oracle, *v), oracle);
  }

  // Best candidate set; ties go to the smallest threshold exponent. Reads
  // caches only.
  Solution best() const {
    const CandidateSet* arg = retired_best_ ? &*retired_best_ : nullptr;
    double value = arg ? O::value(arg->state) : 0.0;
    for (const auto& [j, cand] : candidates_) {
      const double v = O::value(cand.state);
      if (arg == nullptr || v > value) {
        arg = &cand;
        value = v;
      }
    }
    if (arg == nullptr) return {};
    return {arg->members, value};
  }

  double best_value() const {
    double value = retired_best_ ? O::value(retired_best_->state) : 0.0;
    for (const auto& [j, cand] : candidates_)
      value = std::max(value, O::value(cand.state));
    return value;
  }

  void reset() {
    candidates_.clear();
    retired_best_.reset();
    max_singleton_ = 0.0;
    fed_count_ = 0;
  }

  int k() const { return k_; }
  double epsilon() const { return epsilon_; }
  double max_singleton() const { return max_singleton_; }
  std::uint64_t fed_count() const { return fed_count_; }
  std::size_t live_thresholds() const { return candidates_.size(); }
  const std::map<int, CandidateSet>& candidates() const { return candidates_; }

  // (1+eps)^j.
  double threshold(int j) const { return std::pow(1.0 + epsilon_, j); }

  // Upper bound on live thresholds: ceil(log_{1+eps}(2k)) + 1.
  std::size_t threshold_budget() const {
    return static_cast<std::size_t>(
               std::ceil(std::log(2.0 * k_) / std::log1p(epsilon_))) +
           1;
  }

 private:
  // Smallest j with (1+eps)^j >= x.
  int ceil_exponent(double x) const {
    int j = static_cast<int>(std::floor(std::log(x) / std::log1p(epsilon_)));
    while (threshold(j) < x) ++j;
    while (threshold(j - 1) >= x) --j;
    return j;
  }

  // Largest j with (1+eps)^j <= x.
  int floor_exponent(double x) const {
    int j = static_cast<int>(std::floor(std::log(x) / std::log1p(epsilon_)));
    while (threshold(j) > x) --j;
    while (threshold(j + 1) <= x) ++j;
    return j;
  }

  void relattice(const O& oracle) {
    const int lo = ceil_exponent(max_singleton_);
    const int hi = floor_exponent(2.0 * k_ * max_singleton_);
    const auto keep = candidates_.lower_bound(lo);
    for (auto it = candidates_.begin(); it != keep; ++it) {
      const double v = O::value(it->second.state);
      if (v > 0.0 && (!retired_best_ || v > O::value(retired_best_->state)))
        retired_best_ = std::move(it->second);
    }
    candidates_.erase(candidates_.begin(), keep);
    for (int j = lo; j <= hi; ++j)
      if (!candidates_.contains(j))
        candidates_.emplace(j, CandidateSet{{}, oracle.empty_state()});
  }

  int k_;
  double epsilon_;
  double max_singleton_ = 0.0;
  std::uint64_t fed_count_ = 0;
  std::map<int, CandidateSet> candidates_;
  std::optional<CandidateSet> retired_best_;
};

}  // namespace ssoid
