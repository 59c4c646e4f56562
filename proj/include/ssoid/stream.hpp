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

// The inhomogeneous-decaying stream model: per-timestamp batches grouped by
// lifespan, the active set S_t, lifespan generators and CSV ingestion.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <type_traits>
#include <variant>
#include <vector>

#include "ssoid/element.hpp"
#include "ssoid/errors.hpp"

namespace ssoid {

// All elements arriving at one timestamp. groups[l] holds V_l^(t) in input
// order; iteration over groups is by ascending lifespan.
struct StreamBatch {
  Timestamp t = 0;
  std::map<Timestamp, std::vector<ElementPtr>> groups;

  bool empty() const { return groups.empty(); }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& [l, v] : groups) n += v.size();
    return n;
  }

  // V_t in canonical order: ascending lifespan, then input order.
  std::vector<ElementPtr> elements() const {
    std::vector<ElementPtr> out;
    for (const auto& [l, v] : groups) out.insert(out.end(), v.begin(), v.end());
    return out;
  }

  Timestamp max_lifespan() const {
    return groups.empty() ? 0 : groups.rbegin()->first;
  }
};

// Groups a slice of same-timestamp elements into a batch.
inline StreamBatch make_batch(Timestamp t, std::span<const ElementPtr> elems) {
  StreamBatch b;
  b.t = t;
  for (const auto& e : elems) {
    if (e->arrival != t)
      throw DataError("element '" + e->id + "' does not arrive at t=" +
                      std::to_string(t));
    b.groups[e->remaining(t)].push_back(e);
  }
  return b;
}

// Replays an in-memory element sequence as timestamped batches.
class VectorSource {
 public:
  VectorSource() = default;
  explicit VectorSource(std::vector<ElementPtr> elements)
      : elements_(std::move(elements)) {}

  // Next non-empty batch, or nullopt at end of stream. Throws DataError if
  // an element's timestamp goes backwards.
  std::optional<StreamBatch> next_batch() {
    if (pos_ >= elements_.size()) return std::nullopt;
    const Timestamp t = elements_[pos_]->arrival;
    if (last_t_ && t <= *last_t_)
      throw DataError("out-of-order timestamp at element '" +
                      elements_[pos_]->id + "' (t=" + std::to_string(t) +
                      " after t=" + std::to_string(*last_t_) + ")");
    std::size_t end = pos_;
    while (end < elements_.size() && elements_[end]->arrival == t) ++end;
    auto batch = make_batch(
        t, std::span<const ElementPtr>(elements_).subspan(pos_, end - pos_));
    pos_ = end;
    last_t_ = t;
    return batch;
  }

  // Next arrival time without consuming, or nullopt at end.
  std::optional<Timestamp> peek_time() const {
    if (pos_ >= elements_.size()) return std::nullopt;
    return elements_[pos_]->arrival;
  }

  const std::vector<ElementPtr>& elements() const { return elements_; }

 private:
  std::vector<ElementPtr> elements_;
  std::size_t pos_ = 0;
  std::optional<Timestamp> last_t_;
};

// S_t, ordered by (expiry, arrival, insertion order). Insertion order is the
// canonical feed order when callers insert batches group by group.
class ActiveStore {
 public:
  void insert(ElementPtr e) {
    const Key key{e->expiry, e->arrival, next_seq_++};
    items_.emplace(key, std::move(e));
  }

  template <class Range>
  void insert_all(const Range& elems) {
    for (const auto& e : elems) insert(e);
  }

  // Removes and returns every element with expiry <= t.
  std::vector<ElementPtr> evict_expired(Timestamp t) {
    std::vector<ElementPtr> out;
    auto it = items_.begin();
    while (it != items_.end() && std::get<0>(it->first) <= t) {
      out.push_back(std::move(it->second));
      it = items_.erase(it);
    }
    return out;
  }

  // Elements with expiry in [lo, hi), in canonical (insertion) order.
  std::vector<ElementPtr> expiring_in(Timestamp lo, Timestamp hi) const {
    if (lo >= hi) return {};
    std::vector<std::pair<std::uint64_t, ElementPtr>> hits;
    for (auto it = items_.lower_bound(Key{lo, 0, 0});
         it != items_.end() && std::get<0>(it->first) < hi; ++it)
      hits.emplace_back(std::get<2>(it->first), it->second);
    std::sort(hits.begin(), hits.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<ElementPtr> out;
    out.reserve(hits.size());
    for (auto& [seq, e] : hits) out.push_back(std::move(e));
    return out;
  }

  // True if some element has expiry strictly inside (lo, hi).
  bool any_expiring_between(Timestamp lo, Timestamp hi) const {
    if (lo == kInfinite) return false;
    auto it = items_.lower_bound(Key{lo + 1, 0, 0});
    return it != items_.end() && std::get<0>(it->first) < hi;
  }

  // All of S_t in canonical order.
  std::vector<ElementPtr> elements() const {
    std::vector<std::pair<std::uint64_t, ElementPtr>> all;
    all.reserve(items_.size());
    for (const auto& [key, e] : items_) all.emplace_back(std::get<2>(key), e);
    std::sort(all.begin(), all.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<ElementPtr> out;
    out.reserve(all.size());
    for (auto& [seq, e] : all) out.push_back(std::move(e));
    return out;
  }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

 private:
  using Key = std::tuple<Timestamp, Timestamp, std::uint64_t>;

  std::map<Key, ElementPtr> items_;
  std::uint64_t next_seq_ = 0;
};

struct ConstantLifespan {
  Timestamp window = 1;
};
struct InfiniteLifespan {};
// P(l) = (1-p)^(l-1) p for l >= 1; draws above `cap` are clamped to it.
struct GeometricLifespan {
  double p = 0.5;
  Timestamp cap = 1;
};

using LifespanDistribution =
    std::variant<ConstantLifespan, InfiniteLifespan, GeometricLifespan>;

class LifespanGenerator {
 public:
  LifespanGenerator(LifespanDistribution dist, std::uint64_t seed)
      : dist_(dist), rng_(seed) {
    if (const auto* c = std::get_if<ConstantLifespan>(&dist_)) {
      if (c->window < 1) throw ConfigError("constant lifespan must be >= 1");
    } else if (const auto* g = std::get_if<GeometricLifespan>(&dist_)) {
      if (!(g->p > 0.0 && g->p < 1.0))
        throw ConfigError("geometric lifespan needs 0 < p < 1");
      if (g->cap < 1) throw ConfigError("lifespan cap L must be >= 1");
    }
  }

  Timestamp draw() {
    return std::visit(
        [this](const auto& d) -> Timestamp {
          using D = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<D, ConstantLifespan>) {
            return d.window;
          } else if constexpr (std::is_same_v<D, InfiniteLifespan>) {
            return kInfinite;
          } else {
            // std::geometric_distribution counts failures before the first
            // success, so the lifespan is one more than the draw.
            std::geometric_distribution<Timestamp> geo(d.p);
            return std::min<Timestamp>(geo(rng_) + 1, d.cap);
          }
        },
        dist_);
  }

  // Upper bound on any draw; kInfinite if unbounded.
  Timestamp max_lifespan() const {
    if (const auto* c = std::get_if<ConstantLifespan>(&dist_)) return c->window;
    if (const auto* g = std::get_if<GeometricLifespan>(&dist_)) return g->cap;
    return kInfinite;
  }

  const LifespanDistribution& distribution() const { return dist_; }

 private:
  LifespanDistribution dist_;
  std::mt19937_64 rng_;
};

// Element CSV: header `id,arrival_time,lifespan,cover`, cover items separated
// by ';', lifespan may be `inf`. Fields are not quoted.
namespace csv {

inline constexpr std::string_view kHeader = "id,arrival_time,lifespan,cover";

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::optional<Timestamp> parse_int(std::string_view s) {
  Timestamp v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

inline std::string_view trim_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

}  // namespace detail

struct ReadOptions {
  // Replaces every record's lifespan with a fresh draw when set.
  LifespanGenerator* lifespan_override = nullptr;
  bool allow_infinite = true;
};

// Parses the whole input and returns elements stably sorted by arrival time.
inline std::vector<ElementPtr> read_elements(std::istream& in,
                                             ItemDictionary& dict,
                                             const ReadOptions& opts = {}) {
  std::string line;
  if (!std::getline(in, line) || detail::trim_cr(line) != kHeader)
    throw DataError("line 1: expected header '" + std::string(kHeader) + "'");
  std::vector<ElementPtr> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto row = detail::trim_cr(line);
    if (row.empty()) continue;
    const auto where = "line " + std::to_string(lineno) + ": ";
    const auto fields = detail::split(row, ',');
    if (fields.size() != 4)
      throw DataError(where + "expected 4 fields, got " +
                      std::to_string(fields.size()));
    if (fields[0].empty()) throw DataError(where + "empty id");
    const auto arrival = detail::parse_int(fields[1]);
    if (!arrival || *arrival < 0)
      throw DataError(where + "bad arrival_time '" + std::string(fields[1]) + "'");
    Timestamp lifespan = 0;
    if (fields[2] == "inf") {
      if (!opts.allow_infinite)
        throw DataError(where + "infinite lifespan not allowed here");
      lifespan = kInfinite;
    } else {
      const auto l = detail::parse_int(fields[2]);
      if (!l || *l < 1)
        throw DataError(where + "lifespan must be an integer >= 1, got '" +
                        std::string(fields[2]) + "'");
      lifespan = *l;
    }
    if (opts.lifespan_override) lifespan = opts.lifespan_override->draw();
    std::vector<ItemId> cover;
    if (!fields[3].empty())
      for (auto item : detail::split(fields[3], ';'))
        if (!item.empty()) cover.push_back(dict.intern(item));
    out.push_back(make_element(std::string(fields[0]), *arrival, lifespan,
                               std::move(cover)));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a->arrival < b->arrival;
  });
  return out;
}

inline std::vector<ElementPtr> read_elements_file(const std::string& path,
                                                  ItemDictionary& dict,
                                                  const ReadOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset '" + path + "'");
  try {
    return read_elements(in, dict, opts);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

inline void write_elements(std::ostream& out,
                           std::span<const ElementPtr> elements,
                           const ItemDictionary& dict) {
  out << kHeader << '\n';
  for (const auto& e : elements) {
    out << e->id << ',' << e->arrival << ',';
    if (e->lifespan == kInfinite)
      out << "inf";
    else
      out << e->lifespan;
    out << ',';
    for (std::size_t i = 0; i < e->cover.size(); ++i)
      out << (i ? ";" : "") << dict.name(e->cover[i]);
    out << '\n';
  }
}

}  // namespace csv

}  // namespace ssoid
