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

// Monotone submodular utilities and oracle-call accounting.
//
// An oracle exposes an opaque per-candidate-set State so that marginal gains
// can be answered incrementally. Every gain() or evaluate() is charged one
// oracle call; insert() commits an already-computed gain and is free.

#include <atomic>
#include <concepts>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ssoid/element.hpp"

namespace ssoid {

// Thread-safe call counter. Copies start from the source's current count.
class OracleCounter {
 public:
  OracleCounter() = default;
  OracleCounter(const OracleCounter& other) : count_(other.value()) {}
  OracleCounter& operator=(const OracleCounter& other) {
    count_.store(other.value(), std::memory_order_relaxed);
    return *this;
  }

  void add(std::uint64_t n = 1) { count_.fetch_add(n, std::memory_order_relaxed); }
  std::uint64_t value() const { return count_.load(std::memory_order_relaxed); }
  void reset() { count_.store(0, std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> count_{0};
};

template <class O>
concept UtilityOracle =
    requires(O& o, const O& co, typename O::State& s,
             const typename O::State& cs, const Element& e,
             std::span<const ElementPtr> set, double g) {
      { co.empty_state() } -> std::same_as<typename O::State>;
      { co.state_of(set) } -> std::same_as<typename O::State>;
      { o.gain(cs, e) } -> std::convertible_to<double>;
      { co.insert(s, e, g) } -> std::same_as<void>;
      { O::value(cs) } -> std::convertible_to<double>;
      { o.evaluate(set) } -> std::convertible_to<double>;
      { co.calls() } -> std::convertible_to<std::uint64_t>;
    };

// f(S) = |union of cover(v) for v in S|.
class CoverageOracle {
 public:
  struct State {
    std::unordered_set<ItemId> covered;
    double value = 0.0;
  };

  State empty_state() const { return {}; }

  // Cache for an existing set; bookkeeping, not charged.
  State state_of(std::span<const ElementPtr> set) const {
    State s;
    for (const auto& e : set) s.covered.insert(e->cover.begin(), e->cover.end());
    s.value = static_cast<double>(s.covered.size());
    return s;
  }

  double evaluate(std::span<const ElementPtr> set) {
    counter_.add();
    std::unordered_set<ItemId> covered;
    for (const auto& e : set) covered.insert(e->cover.begin(), e->cover.end());
    return static_cast<double>(covered.size());
  }

  double gain(const State& s, const Element& e) {
    counter_.add();
    std::size_t fresh = 0;
    for (ItemId item : e.cover) fresh += s.covered.count(item) == 0 ? 1 : 0;
    return static_cast<double>(fresh);
  }

  void insert(State& s, const Element& e, double /*gain*/) const {
    s.covered.insert(e.cover.begin(), e.cover.end());
    s.value = static_cast<double>(s.covered.size());
  }

  static double value(const State& s) { return s.value; }

  std::uint64_t calls() const { return counter_.value(); }
  void reset_calls() { counter_.reset(); }

 private:
  OracleCounter counter_;
};

// Wraps an arbitrary set function. Gains re-evaluate f on the member list,
// so this is meant for tests and small generic objectives.
class FunctionOracle {
 public:
  using SetFunction = std::function<double(std::span<const Element* const>)>;

  struct State {
    std::vector<const Element*> members;
    double value = 0.0;
  };

  explicit FunctionOracle(SetFunction f) : f_(std::move(f)) {}

  State empty_state() const { return {}; }

  State state_of(std::span<const ElementPtr> set) const {
    State s;
    for (const auto& e : set) s.members.push_back(e.get());
    s.value = f_(s.members);
    return s;
  }

  double evaluate(std::span<const ElementPtr> set) {
    counter_.add();
    std::vector<const Element*> raw;
    raw.reserve(set.size());
    for (const auto& e : set) raw.push_back(e.get());
    return f_(raw);
  }

  double gain(const State& s, const Element& e) {
    counter_.add();
    auto with = s.members;
    with.push_back(&e);
    return f_(with) - s.value;
  }

  void insert(State& s, const Element& e, double gain) const {
    s.members.push_back(&e);
    s.value += gain;
  }

  static double value(const State& s) { return s.value; }

  std::uint64_t calls() const { return counter_.value(); }
  void reset_calls() { counter_.reset(); }

 private:
  SetFunction f_;
  OracleCounter counter_;
};

// f({e}); one oracle call.
template <UtilityOracle O>
double singleton_value(O& oracle, const Element& e) {
  return oracle.gain(oracle.empty_state(), e);
}

// f(S + s) - f(S); one oracle call. The cache for S is rebuilt uncharged.
template <UtilityOracle O>
double marginal_gain(O& oracle, const Element& s,
                     std::span<const ElementPtr> base) {
  return oracle.gain(oracle.state_of(base), s);
}

}  // namespace ssoid
