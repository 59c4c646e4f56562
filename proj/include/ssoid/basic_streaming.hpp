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

// BasicStreaming: L sieve instances where logical instance l only sees
// elements with lifespan >= l. After each step the head instance is reset
// and rotated to the far end, so logical instance 1 has always processed
// exactly the active set S_t.

#include <cstdint>
#include <string>
#include <vector>

#include "ssoid/errors.hpp"
#include "ssoid/sieve.hpp"
#include "ssoid/stream.hpp"
#include "ssoid/utility.hpp"

namespace ssoid {

struct StreamingParams {
  int k = 10;
  double epsilon = 0.1;
};

template <UtilityOracle O>
class BasicStreaming {
 public:
  BasicStreaming(StreamingParams params, Timestamp max_lifespan, O oracle = O{},
                 Timestamp start_time = 1)
      : params_(params),
        max_lifespan_(max_lifespan),
        t_(start_time),
        oracle_(std::move(oracle)) {
    if (max_lifespan < 1) throw ConfigError("basic: L must be >= 1");
    ring_.assign(static_cast<std::size_t>(max_lifespan),
                 SieveInstance<O>(params.k, params.epsilon));
  }

  // Data update: element with lifespan l goes to logical instances 1..l.
  void observe(const StreamBatch& batch) {
    if (batch.t != t_)
      throw DataError("basic: batch for t=" + std::to_string(batch.t) +
                      " while at t=" + std::to_string(t_));
    if (batch.max_lifespan() > max_lifespan_)
      throw GuardError("basic: lifespan " + std::to_string(batch.max_lifespan()) +
                       " exceeds L=" + std::to_string(max_lifespan_));
    for (const auto& [l, group] : batch.groups) {
      for (const auto& v : group) {
        const double singleton = singleton_value(oracle_, *v);
        for (Timestamp i = 1; i <= l; ++i)
          mutable_instance(i).process(v, singleton, oracle_);
      }
    }
  }

  // Time update: recycle the head, O(1) rotation.
  void advance() {
    ring_[head_].reset();
    head_ = (head_ + 1) % ring_.size();
    ++t_;
  }

  Solution solution() const { return instance(1).best(); }

  // Logical instance l, 1 <= l <= L.
  const SieveInstance<O>& instance(Timestamp l) const {
    return ring_[slot(l)];
  }

  Timestamp time() const { return t_; }
  Timestamp max_lifespan() const { return max_lifespan_; }
  std::uint64_t calls() const { return oracle_.calls(); }
  const O& oracle() const { return oracle_; }

 private:
  std::size_t slot(Timestamp l) const {
    return (head_ + static_cast<std::size_t>(l - 1)) % ring_.size();
  }
  SieveInstance<O>& mutable_instance(Timestamp l) { return ring_[slot(l)]; }

  StreamingParams params_;
  Timestamp max_lifespan_;
  Timestamp t_;
  O oracle_;
  std::vector<SieveInstance<O>> ring_;
  std::size_t head_ = 0;
};

}  // namespace ssoid
