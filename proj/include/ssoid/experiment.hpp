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

// Experiment driver: feeds the same batches to every selected algorithm,
// each with its own oracle counter, and records value, solution and
// cumulative oracle calls per timestep.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssoid/baselines.hpp"
#include "ssoid/basic_streaming.hpp"
#include "ssoid/histogram.hpp"
#include "ssoid/stream.hpp"
#include "ssoid/synth.hpp"
#include "ssoid/utility.hpp"

namespace ssoid {

inline constexpr std::string_view kVersion = "1.0.0";

inline const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> names{
      "basic", "histapprox", "histstreaming", "greedy", "random", "exact"};
  return names;
}

struct ExperimentConfig {
  std::optional<std::string> dataset;
  // Replace dataset lifespans by Geo(p) draws capped at L.
  bool override_lifespans = false;
  std::optional<SynthSpec> synth;
  std::vector<std::string> algorithms{"histstreaming", "greedy"};
  int k = 10;
  double epsilon = 0.1;
  std::optional<double> p;
  Timestamp L = 1000;
  Timestamp T = 100;
  std::uint64_t seed = 1;
  std::string output = "out";
  // Histogram algorithms keep their prune/arrival/delta log.
  bool record_events = false;
};

inline void validate(const ExperimentConfig& c) {
  if (c.dataset.has_value() == c.synth.has_value())
    throw ConfigError("config: exactly one of 'dataset' and 'synth' is required");
  if (c.algorithms.empty()) throw ConfigError("config: no algorithms selected");
  for (const auto& a : c.algorithms)
    if (std::find(known_algorithms().begin(), known_algorithms().end(), a) ==
        known_algorithms().end())
      throw ConfigError("config: unknown algorithm '" + a + "'");
  if (c.k < 1) throw ConfigError("config: k must be >= 1");
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0))
    throw ConfigError("config: epsilon must be in (0, 1)");
  if (c.p && !(*c.p > 0.0 && *c.p < 1.0))
    throw ConfigError("config: p must be in (0, 1)");
  if (c.L < 1) throw ConfigError("config: L must be >= 1");
  if (c.T < 1) throw ConfigError("config: T must be >= 1");
  if (c.override_lifespans && !c.p)
    throw ConfigError("config: override_lifespans requires p");
  if (c.synth && !c.p) throw ConfigError("config: synthetic streams require p");
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  for (auto part : csv::detail::split(s, ','))
    if (!part.empty()) out.emplace_back(part);
  return out;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    if (j.contains("dataset")) c.dataset = j.at("dataset").get<std::string>();
    c.override_lifespans = j.value("override_lifespans", false);
    if (j.contains("algorithms")) {
      const auto& a = j.at("algorithms");
      c.algorithms = a.is_string() ? split_list(a.get<std::string>())
                                   : a.get<std::vector<std::string>>();
    }
    c.k = j.value("k", c.k);
    c.epsilon = j.value("epsilon", c.epsilon);
    if (j.contains("p")) c.p = j.at("p").get<double>();
    c.L = j.value("L", c.L);
    c.T = j.value("T", c.T);
    c.seed = j.value("seed", c.seed);
    c.output = j.value("output", c.output);
    c.record_events = j.value("record_events", c.record_events);
    if (j.contains("synth")) {
      SynthSpec defaults;
      defaults.T = c.T;
      defaults.L = c.L;
      defaults.seed = c.seed;
      if (c.p) defaults.p = *c.p;
      c.synth = synth_spec_from_json(j.at("synth"), defaults);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  validate(c);
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return config_from_json(j);
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  if (c.dataset) j["dataset"] = *c.dataset;
  j["override_lifespans"] = c.override_lifespans;
  if (c.synth) j["synth"] = to_json(*c.synth);
  j["algorithms"] = c.algorithms;
  j["k"] = c.k;
  j["epsilon"] = c.epsilon;
  if (c.p) j["p"] = *c.p;
  j["L"] = c.L;
  j["T"] = c.T;
  j["seed"] = c.seed;
  j["output"] = c.output;
  j["record_events"] = c.record_events;
  return j;
}

struct AlgorithmRecord {
  std::string algo;
  double value = 0.0;
  std::uint64_t calls_cum = 0;
  std::vector<std::string> solution_ids;
};

struct TimestepRecord {
  Timestamp t = 0;
  std::size_t active_size = 0;
  std::vector<AlgorithmRecord> algorithms;

  const AlgorithmRecord* find(std::string_view name) const {
    for (const auto& a : algorithms)
      if (a.algo == name) return &a;
    return nullptr;
  }
};

// Uniform driver interface over streaming algorithms and the baselines that
// recompute from the active set.
class AlgorithmRunner {
 public:
  virtual ~AlgorithmRunner() = default;
  virtual void observe(const StreamBatch& batch, const ActiveStore& active) = 0;
  virtual Solution solution() const = 0;
  virtual std::uint64_t calls() const = 0;
  virtual void advance() = 0;
  // JSON-lines audit log; false when the algorithm keeps none.
  virtual bool write_events(std::ostream&) const { return false; }
};

namespace detail {

template <class Algorithm>
class StreamingRunner final : public AlgorithmRunner {
 public:
  explicit StreamingRunner(Algorithm alg) : alg_(std::move(alg)) {}
  void observe(const StreamBatch& batch, const ActiveStore&) override {
    alg_.observe(batch);
  }
  Solution solution() const override { return alg_.solution(); }
  std::uint64_t calls() const override { return alg_.calls(); }
  void advance() override { alg_.advance(); }
  bool write_events(std::ostream& out) const override {
    if constexpr (requires { alg_.write_events(out); }) {
      if (!alg_.params().record_events) return false;
      alg_.write_events(out);
      return true;
    } else {
      return false;
    }
  }

 private:
  Algorithm alg_;
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t t) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (t + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class BaselineRunner final : public AlgorithmRunner {
 public:
  enum class Kind { kGreedy, kRandom, kExact };
  BaselineRunner(Kind kind, int k, std::uint64_t seed)
      : kind_(kind), k_(k), seed_(seed) {}

  void observe(const StreamBatch& batch, const ActiveStore& active) override {
    const auto elems = active.elements();
    switch (kind_) {
      case Kind::kGreedy:
        current_ = greedy_select(std::span<const ElementPtr>(elems), k_, oracle_);
        break;
      case Kind::kRandom:
        current_ = random_select(std::span<const ElementPtr>(elems), k_,
                                 mix_seed(seed_, static_cast<std::uint64_t>(batch.t)),
                                 oracle_);
        break;
      case Kind::kExact:
        current_ = exact_opt(std::span<const ElementPtr>(elems), k_, oracle_);
        break;
    }
  }
  Solution solution() const override { return current_; }
  std::uint64_t calls() const override { return oracle_.calls(); }
  void advance() override {}

 private:
  Kind kind_;
  int k_;
  std::uint64_t seed_;
  CoverageOracle oracle_;
  Solution current_;
};

}  // namespace detail

inline std::unique_ptr<AlgorithmRunner> make_runner(const std::string& name,
                                                    const ExperimentConfig& c,
                                                    Timestamp start) {
  using detail::BaselineRunner;
  const StreamingParams sp{c.k, c.epsilon};
  const HistogramParams hp{c.k, c.epsilon, true, c.record_events};
  if (name == "basic")
    return std::make_unique<detail::StreamingRunner<BasicStreaming<CoverageOracle>>>(
        BasicStreaming<CoverageOracle>(sp, c.L, {}, start));
  if (name == "histapprox")
    return std::make_unique<detail::StreamingRunner<HistApprox<CoverageOracle>>>(
        HistApprox<CoverageOracle>(hp, {}, start));
  if (name == "histstreaming")
    return std::make_unique<detail::StreamingRunner<HistStreaming<CoverageOracle>>>(
        HistStreaming<CoverageOracle>(hp, {}, start));
  if (name == "greedy")
    return std::make_unique<BaselineRunner>(BaselineRunner::Kind::kGreedy, c.k, c.seed);
  if (name == "random")
    return std::make_unique<BaselineRunner>(BaselineRunner::Kind::kRandom, c.k, c.seed);
  if (name == "exact")
    return std::make_unique<BaselineRunner>(BaselineRunner::Kind::kExact, c.k, c.seed);
  throw ConfigError("unknown algorithm '" + name + "'");
}

// Materializes the configured element stream.
inline std::vector<ElementPtr> load_stream(const ExperimentConfig& c,
                                           ItemDictionary& dict) {
  if (c.synth) return generate_stream(*c.synth, dict);
  std::optional<LifespanGenerator> gen;
  csv::ReadOptions opts;
  opts.allow_infinite = false;
  if (c.override_lifespans) {
    gen.emplace(GeometricLifespan{*c.p, c.L}, c.seed ^ 0x5bd1e995ULL);
    opts.lifespan_override = &*gen;
  }
  return csv::read_elements_file(*c.dataset, dict, opts);
}

using RecordSink = std::function<void(const TimestepRecord&)>;
// Called once per algorithm after the last step.
using RunnerSink = std::function<void(const std::string&, const AlgorithmRunner&)>;

// Runs T timesteps starting at the first arrival (t = 1 for an empty
// stream). Steps without arrivals deliver empty batches.
inline std::vector<TimestepRecord> run_experiment(
    const ExperimentConfig& c, const std::vector<ElementPtr>& elements,
    const RecordSink& sink = {}, const RunnerSink& finished = {}) {
  validate(c);
  VectorSource source(elements);
  const Timestamp start = source.peek_time().value_or(1);
  std::vector<std::unique_ptr<AlgorithmRunner>> runners;
  for (const auto& name : c.algorithms) runners.push_back(make_runner(name, c, start));

  ActiveStore active;
  std::vector<TimestepRecord> records;
  for (Timestamp t = start; t < start + c.T; ++t) {
    StreamBatch batch;
    batch.t = t;
    if (source.peek_time() == t) batch = *source.next_batch();
    active.evict_expired(t);
    for (const auto& [l, group] : batch.groups) active.insert_all(group);

    TimestepRecord rec;
    rec.t = t;
    rec.active_size = active.size();
    for (std::size_t a = 0; a < runners.size(); ++a) {
      const auto where = c.algorithms[a] + " at t=" + std::to_string(t) + ": ";
      try {
        runners[a]->observe(batch, active);
      } catch (const GuardError& e) {
        throw GuardError(where + e.what());
      } catch (const DataError& e) {
        throw DataError(where + e.what());
      }
      const auto sol = runners[a]->solution();
      AlgorithmRecord ar{c.algorithms[a], sol.value, runners[a]->calls(), {}};
      for (const auto& m : sol.members) ar.solution_ids.push_back(m->id);
      rec.algorithms.push_back(std::move(ar));
    }
    for (auto& r : runners) r->advance();
    if (sink) sink(rec);
    records.push_back(std::move(rec));
  }
  if (finished)
    for (std::size_t a = 0; a < runners.size(); ++a) finished(c.algorithms[a], *runners[a]);
  return records;
}

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline constexpr std::string_view kCsvHeader =
    "t,algo,value,calls_cum,active_size,solution_ids";

inline void write_csv_row(std::ostream& out, const TimestepRecord& rec) {
  for (const auto& a : rec.algorithms) {
    out << rec.t << ',' << a.algo << ',' << format_double(a.value) << ','
        << a.calls_cum << ',' << rec.active_size << ',';
    for (std::size_t i = 0; i < a.solution_ids.size(); ++i)
      out << (i ? ";" : "") << a.solution_ids[i];
    out << '\n';
  }
}

inline nlohmann::json manifest(const ExperimentConfig& c) {
  nlohmann::json m;
  m["tool"] = "ssoid";
  m["version"] = std::string(kVersion);
  m["seed"] = c.seed;
  m["config"] = to_json(c);
  m["accounting"] = {
      {"marginal_gain", "one oracle call per gain query"},
      {"singleton", "one oracle call per arriving element per algorithm; replays reuse it"},
      {"greedy", "every gain query of every per-step rerun, lazy refreshes included"},
      {"random", "one evaluate call per step"}};
  m["value_parity_threshold"] = 0.9;
  return m;
}

struct FinalSummary {
  std::string algo;
  double value = 0.0;
  std::uint64_t calls_cum = 0;
  std::optional<double> value_ratio;  // vs greedy
  std::optional<double> calls_ratio;  // vs greedy
};

inline std::vector<FinalSummary> summarize(const std::vector<TimestepRecord>& records) {
  std::vector<FinalSummary> out;
  if (records.empty()) return out;
  const auto& last = records.back();
  const auto* greedy = last.find("greedy");
  for (const auto& a : last.algorithms) {
    FinalSummary s{a.algo, a.value, a.calls_cum, {}, {}};
    if (greedy && greedy->value > 0) s.value_ratio = a.value / greedy->value;
    if (greedy && greedy->calls_cum > 0)
      s.calls_ratio = static_cast<double>(a.calls_cum) / greedy->calls_cum;
    out.push_back(s);
  }
  return out;
}

}  // namespace ssoid
