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

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ssoid {

// Discrete stream time. Lifespans and expiries share the same unit.
using Timestamp = std::int64_t;

// Sentinel for an element that never expires (insertion-only streams).
inline constexpr Timestamp kInfinite = std::numeric_limits<Timestamp>::max();

// Dense identifier of a coverable item (a venue, a commenter, ...).
using ItemId = std::uint32_t;

// A stream item. `expiry` is absolute: the element is active at time t iff
// arrival <= t < expiry.
struct Element {
  std::string id;
  Timestamp arrival = 0;
  Timestamp lifespan = 1;
  Timestamp expiry = 1;
  std::vector<ItemId> cover;

  bool infinite() const { return expiry == kInfinite; }

  bool active_at(Timestamp t) const { return t >= arrival && expiry > t; }

  // Remaining lifespan at time t; kInfinite for never-expiring elements.
  Timestamp remaining(Timestamp t) const {
    return infinite() ? kInfinite : expiry - t;
  }
};

using ElementPtr = std::shared_ptr<const Element>;

// expiry = arrival + lifespan, saturating at kInfinite.
inline Timestamp expiry_of(Timestamp arrival, Timestamp lifespan) {
  if (lifespan == kInfinite || arrival > kInfinite - lifespan) return kInfinite;
  return arrival + lifespan;
}

// Builds an element, deduplicating the cover. Throws nothing; callers
// validate lifespan >= 1 before construction.
inline ElementPtr make_element(std::string id, Timestamp arrival,
                               Timestamp lifespan, std::vector<ItemId> cover) {
  std::sort(cover.begin(), cover.end());
  cover.erase(std::unique(cover.begin(), cover.end()), cover.end());
  auto e = std::make_shared<Element>();
  e->id = std::move(id);
  e->arrival = arrival;
  e->lifespan = lifespan;
  e->expiry = expiry_of(arrival, lifespan);
  e->cover = std::move(cover);
  return e;
}

// Interns opaque item names into dense ItemIds. This is the coverage
// universe: every id handed out is unique.
class ItemDictionary {
 public:
  ItemId intern(std::string_view name) {
    auto it = index_.find(std::string(name));
    if (it != index_.end()) return it->second;
    const auto id = static_cast<ItemId>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), id);
    return id;
  }

  const std::string& name(ItemId id) const { return names_.at(id); }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, ItemId> index_;
};

}  // namespace ssoid
