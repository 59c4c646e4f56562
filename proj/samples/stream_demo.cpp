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

// Feeds a small hand-written stream to HistStreaming and prints its solution
// and live indices after every step.

#include <iostream>
#include <vector>

#include "ssoid/histogram.hpp"

int main() {
  using namespace ssoid;
  HistStreaming<CoverageOracle> hist({/*k=*/2, /*epsilon=*/0.1});

  const std::vector<ElementPtr> stream{
      make_element("a", 1, 3, {0, 1, 2}), make_element("b", 1, 1, {2, 3}),
      make_element("c", 2, 5, {4, 5}),    make_element("d", 3, 2, {0, 5, 6, 7}),
      make_element("e", 4, 4, {8}),
  };
  VectorSource source(stream);
  for (Timestamp t = 1; t <= 6; ++t) {
    StreamBatch batch;
    batch.t = t;
    if (source.peek_time() == t) batch = *source.next_batch();
    hist.observe(batch);

    const auto sol = hist.solution();
    std::cout << "t=" << t << " value=" << sol.value << " members=";
    for (const auto& m : sol.members) std::cout << m->id << ' ';
    std::cout << "indices=";
    for (auto x : hist.indices()) std::cout << x << ' ';
    std::cout << "calls=" << hist.calls() << '\n';
    hist.advance();
  }
}
