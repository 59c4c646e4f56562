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

// Histogram approximations of BasicStreaming.
//
// Only a sparse set of sieve instances is kept, keyed by absolute expiry;
// the logical index of an entry at time t is expiry - t, so time advances
// without touching the entries. An arriving group with lifespan l either
// hits an existing index (case 1), becomes the new largest index with a
// fresh instance (case 2), or is inserted before its successor l2 as a copy
// of the successor's instance (case 3). The group is then fed to every index
// <= l and epsilon-redundant indices are pruned.
//
// HistoryPolicy::kReplay (HistApprox) keeps the active set, together with
// each element's singleton value, and replays the elements with lifespan in
// [l, l2) into a case-3 copy. kCompensate
// (HistStreaming) keeps no history; instead each entry carries a
// compensation delta, and pruning compares the interval [g, g + delta].

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ssoid/errors.hpp"
#include "ssoid/sieve.hpp"
#include "ssoid/stream.hpp"
#include "ssoid/utility.hpp"

namespace ssoid {

enum class HistoryPolicy { kReplay, kCompensate };

struct HistogramParams {
  int k = 10;
  double epsilon = 0.1;
  // Disabling pruning keeps one instance per distinct expiry.
  bool prune = true;
  // Keep an in-memory audit log of arrivals, prunes and delta assignments.
  bool record_events = false;
};

struct IndexBounds {
  Timestamp key;
  double lower;
  double upper;
};

struct PruneDecision {
  Timestamp i;
  Timestamp j;
  std::vector<Timestamp> deleted;
  double upper_i;
};

// Redundancy scan over entries sorted by key. For each surviving i in
// ascending order, the largest j > i with lower(j) >= (1 - eps) * upper(i)
// is found and every index strictly between them is deleted at once. One
// decision is returned per i that found such a j, including those with
// nothing to delete.
inline std::vector<PruneDecision> plan_pruning(std::vector<IndexBounds> entries,
                                               double epsilon) {
  std::vector<PruneDecision> out;
  for (std::size_t p = 0; p < entries.size(); ++p) {
    const double need = (1.0 - epsilon) * entries[p].upper;
    std::size_t q = entries.size();
    for (std::size_t c = entries.size(); c-- > p + 1;) {
      if (entries[c].lower >= need) {
        q = c;
        break;
      }
    }
    if (q == entries.size()) continue;
    PruneDecision d{entries[p].key, entries[q].key, {}, entries[p].upper};
    for (std::size_t c = p + 1; c < q; ++c) d.deleted.push_back(entries[c].key);
    entries.erase(entries.begin() + static_cast<std::ptrdiff_t>(p + 1),
                  entries.begin() + static_cast<std::ptrdiff_t>(q));
    out.push_back(std::move(d));
  }
  return out;
}

// One audit log entry. Keys are absolute expiries.
struct HistogramEvent {
  enum class Kind { kArrival, kPrune, kDelta };
  Kind kind;
  Timestamp t;
  Timestamp i = 0;  // arrival: expiry; prune: i; delta: new index
  Timestamp j = 0;  // prune: j
  std::vector<Timestamp> deleted;
  double delta = 0.0;
};

// Unprocessed-data record left behind by a prune of (i, j).
struct GapRecord {
  Timestamp i;
  Timestamp j;
  double delta;
};

template <UtilityOracle O, HistoryPolicy Policy>
class Histogram {
 public:
  struct Entry {
    SieveInstance<O> instance;
    double delta = 0.0;

    double lower() const { return instance.best_value(); }
    double upper() const { return lower() + delta; }
  };

  static constexpr bool kReplay = Policy == HistoryPolicy::kReplay;

  Histogram(HistogramParams params, O oracle = O{}, Timestamp start_time = 1)
      : params_(params), t_(start_time), oracle_(std::move(oracle)) {
    SieveInstance<O> probe(params.k, params.epsilon);  // validates k, eps
  }

  void observe(const StreamBatch& batch) {
    if (batch.t != t_)
      throw DataError("histogram: batch for t=" + std::to_string(batch.t) +
                      " while at t=" + std::to_string(t_));
    for (const auto& [l, group] : batch.groups) process_group(l, group);
  }

  // Handles V_l^(t). Elements must arrive now with lifespan l.
  void process_group(Timestamp l, const std::vector<ElementPtr>& group) {
    if (l < 1) throw DataError("histogram: lifespan must be >= 1");
    if (group.empty()) return;
    const Timestamp e = expiry_of(t_, l);
    for (const auto& v : group)
      if (v->expiry != e)
        throw DataError("histogram: element '" + v->id +
                        "' does not have lifespan " + std::to_string(l));
    log({HistogramEvent::Kind::kArrival, t_, e, 0, {}, 0.0});

    if (!entries_.contains(e)) {
      auto succ = entries_.upper_bound(e);
      if (succ == entries_.end()) {
        entries_.emplace(e, Entry{SieveInstance<O>(params_.k, params_.epsilon)});
      } else {
        Entry fresh{succ->second.instance};
        if constexpr (kReplay) {
          for (const auto& h : store_.expiring_in(e, succ->first))
            fresh.instance.process(h, singletons_.at(h.get()), oracle_);
        } else {
          if (const auto* gap = narrowest_gap(e)) fresh.delta = gap->delta;
          log({HistogramEvent::Kind::kDelta, t_, e, 0, {}, fresh.delta});
        }
        entries_.emplace(e, std::move(fresh));
      }
    }

    for (const auto& v : group) {
      const double singleton = singleton_value(oracle_, *v);
      for (auto it = entries_.begin(); it != entries_.end() && it->first <= e;
           ++it)
        it->second.instance.process(v, singleton, oracle_);
      if constexpr (kReplay) {
        store_.insert(v);
        singletons_[v.get()] = singleton;
      }
    }
    reduce_redundancy();
  }

  // g values come from candidate caches; no oracle calls.
  void reduce_redundancy() {
    if (!params_.prune) return;
    std::vector<IndexBounds> bounds;
    bounds.reserve(entries_.size());
    for (const auto& [key, entry] : entries_)
      bounds.push_back({key, entry.lower(), entry.upper()});
    for (auto& d : plan_pruning(std::move(bounds), params_.epsilon)) {
      for (Timestamp key : d.deleted) entries_.erase(key);
      if constexpr (!kReplay) {
        if (!d.deleted.empty()) record_gap(d.i, d.j, params_.epsilon * d.upper_i);
      }
      log({HistogramEvent::Kind::kPrune, t_, d.i, d.j, std::move(d.deleted), 0.0});
    }
  }

  void advance() {
    const Timestamp next = t_ + 1;
    if constexpr (kReplay)
      for (const auto& gone : store_.evict_expired(next)) singletons_.erase(gone.get());
    entries_.erase(entries_.begin(), entries_.upper_bound(next));
    if constexpr (!kReplay)
      std::erase_if(gaps_, [next](const GapRecord& g) { return g.j <= next; });
    t_ = next;
  }

  // Output of the smallest index; the actual value, never the upper bound.
  Solution solution() const {
    if (entries_.empty()) return {};
    return entries_.begin()->second.instance.best();
  }

  // Live logical indices x = expiry - t, ascending.
  std::vector<Timestamp> indices() const {
    std::vector<Timestamp> out;
    out.reserve(entries_.size());
    for (const auto& [key, entry] : entries_)
      out.push_back(key == kInfinite ? kInfinite : key - t_);
    return out;
  }

  const std::map<Timestamp, Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  Timestamp time() const { return t_; }
  std::uint64_t calls() const { return oracle_.calls(); }
  const O& oracle() const { return oracle_; }
  const HistogramParams& params() const { return params_; }
  const std::vector<HistogramEvent>& events() const { return events_; }

  const ActiveStore& store() const
    requires(kReplay)
  {
    return store_;
  }

  const std::vector<GapRecord>& gaps() const
    requires(!kReplay)
  {
    return gaps_;
  }

  // Writes the audit log as JSON lines with logical indices relative to
  // each event's time.
  void write_events(std::ostream& out) const {
    auto logical = [](Timestamp key, Timestamp t) {
      return key == kInfinite ? std::string("\"inf\"") : std::to_string(key - t);
    };
    for (const auto& ev : events_) {
      switch (ev.kind) {
        case HistogramEvent::Kind::kArrival:
          out << "{\"event\":\"arrival\",\"t\":" << ev.t
              << ",\"l\":" << logical(ev.i, ev.t) << "}\n";
          break;
        case HistogramEvent::Kind::kPrune:
          out << "{\"event\":\"prune\",\"t\":" << ev.t
              << ",\"i\":" << logical(ev.i, ev.t)
              << ",\"j\":" << logical(ev.j, ev.t) << ",\"deleted\":[";
          for (std::size_t n = 0; n < ev.deleted.size(); ++n)
            out << (n ? "," : "") << logical(ev.deleted[n], ev.t);
          out << "]}\n";
          break;
        case HistogramEvent::Kind::kDelta:
          out << "{\"event\":\"delta\",\"t\":" << ev.t
              << ",\"l\":" << logical(ev.i, ev.t) << ",\"delta\":" << ev.delta
              << "}\n";
          break;
      }
    }
  }

 private:
  struct NoStore {};

  void log(HistogramEvent ev) {
    if (params_.record_events) events_.push_back(std::move(ev));
  }

  // A new record supersedes every record lying inside [i, j].
  void record_gap(Timestamp i, Timestamp j, double delta)
    requires(!kReplay)
  {
    std::erase_if(gaps_, [&](const GapRecord& g) { return i <= g.i && g.j <= j; });
    gaps_.push_back({i, j, delta});
  }

  // Narrowest record with i < key < j, or null.
  const GapRecord* narrowest_gap(Timestamp key) const
    requires(!kReplay)
  {
    const GapRecord* best = nullptr;
    for (const auto& g : gaps_) {
      if (!(g.i < key && key < g.j)) continue;
      if (best == nullptr || g.j - g.i < best->j - best->i) best = &g;
    }
    return best;
  }

  HistogramParams params_;
  Timestamp t_;
  O oracle_;
  std::map<Timestamp, Entry> entries_;
  [[no_unique_address]] std::conditional_t<kReplay, ActiveStore, NoStore> store_;
  // f({v}) of each stored element, computed once on arrival.
  [[no_unique_address]] std::conditional_t<
      kReplay, std::unordered_map<const Element*, double>, NoStore>
      singletons_;
  [[no_unique_address]] std::conditional_t<kReplay, NoStore, std::vector<GapRecord>>
      gaps_;
  std::vector<HistogramEvent> events_;
};

template <UtilityOracle O>
using HistApprox = Histogram<O, HistoryPolicy::kReplay>;

template <UtilityOracle O>
using HistStreaming = Histogram<O, HistoryPolicy::kCompensate>;

}  // namespace ssoid
