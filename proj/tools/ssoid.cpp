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

// ssoid: experiment CLI.
//
//   ssoid run      --config cfg.json [--algos a,b] [--out dir] [--events]
//   ssoid sweep    --config cfg.json --axis p|k|epsilon --values v1,v2 [--algos] [--out dir]
//   ssoid synth    --spec spec.json --out elements.csv
//   ssoid validate --dataset elements.csv
//
// Exit codes: 0 success, 1 config error, 2 data error, 3 guard violation.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ssoid/experiment.hpp"

namespace fs = std::filesystem;
using namespace ssoid;

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kData = 2, kGuard = 3 };

std::string ratio_or_blank(const std::optional<double>& r) {
  return r ? format_double(*r) : std::string();
}

std::vector<TimestepRecord> run_to_dir(const ExperimentConfig& cfg,
                                       const fs::path& dir) {
  ItemDictionary dict;
  const auto elements = load_stream(cfg, dict);
  fs::create_directories(dir);
  std::ofstream csv_out(dir / "results.csv");
  if (!csv_out) throw ConfigError("cannot write to '" + dir.string() + "'");
  csv_out << kCsvHeader << '\n';
  auto records = run_experiment(
      cfg, elements, [&](const TimestepRecord& r) { write_csv_row(csv_out, r); },
      [&](const std::string& algo, const AlgorithmRunner& runner) {
        if (!cfg.record_events) return;
        std::ostringstream log;
        if (runner.write_events(log))
          std::ofstream(dir / (algo + ".events.jsonl")) << log.str();
      });
  std::ofstream(dir / "manifest.json") << manifest(cfg).dump(2) << '\n';
  return records;
}

void print_summary(const std::vector<TimestepRecord>& records) {
  if (records.empty()) return;
  std::cout << "final t=" << records.back().t
            << " active=" << records.back().active_size << '\n';
  for (const auto& s : summarize(records)) {
    std::cout << "  " << std::left << std::setw(14) << s.algo
              << " value=" << format_double(s.value) << " calls=" << s.calls_cum;
    if (s.value_ratio) std::cout << " value/greedy=" << format_double(*s.value_ratio);
    if (s.calls_ratio) std::cout << " calls/greedy=" << format_double(*s.calls_ratio);
    std::cout << '\n';
  }
}

ExperimentConfig with_overrides(ExperimentConfig cfg, const std::string& algos,
                                const std::string& out, bool events = false) {
  if (!algos.empty()) cfg.algorithms = split_list(algos);
  if (!out.empty()) cfg.output = out;
  if (events) cfg.record_events = true;
  validate(cfg);
  return cfg;
}

int cmd_run(const std::string& config, const std::string& algos,
            const std::string& out, bool events) {
  const auto cfg = with_overrides(load_config(config), algos, out, events);
  print_summary(run_to_dir(cfg, cfg.output));
  return kOk;
}

int cmd_sweep(const std::string& config, const std::string& axis,
              const std::string& values, const std::string& algos,
              const std::string& out) {
  const auto base = with_overrides(load_config(config), algos, out);
  if (axis != "p" && axis != "k" && axis != "epsilon")
    throw ConfigError("sweep: axis must be one of p, k, epsilon");
  const auto list = split_list(values);
  if (list.empty()) throw ConfigError("sweep: --values is empty");

  fs::create_directories(base.output);
  std::ofstream table(fs::path(base.output) / "summary.csv");
  table << "axis,value,algo,final_value,calls_cum,value_ratio,calls_ratio\n";
  for (const auto& v : list) {
    auto cfg = base;
    try {
      if (axis == "p") {
        cfg.p = std::stod(v);
        if (cfg.synth) cfg.synth->p = *cfg.p;
      } else if (axis == "k") {
        cfg.k = std::stoi(v);
      } else {
        cfg.epsilon = std::stod(v);
      }
    } catch (const std::logic_error&) {
      throw ConfigError("sweep: bad value '" + v + "'");
    }
    validate(cfg);
    if (cfg.synth) validate(*cfg.synth);
    std::cout << axis << "=" << v << '\n';
    const auto records = run_to_dir(cfg, fs::path(base.output) / (axis + "=" + v));
    print_summary(records);
    for (const auto& s : summarize(records))
      table << axis << ',' << v << ',' << s.algo << ',' << format_double(s.value)
            << ',' << s.calls_cum << ',' << ratio_or_blank(s.value_ratio) << ','
            << ratio_or_blank(s.calls_ratio) << '\n';
  }
  return kOk;
}

int cmd_synth(const std::string& spec_path, const std::string& out) {
  std::ifstream in(spec_path);
  if (!in) throw ConfigError("cannot open spec '" + spec_path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(spec_path + ": " + e.what());
  }
  const auto spec = synth_spec_from_json(j);
  ItemDictionary dict;
  const auto elements = generate_stream(spec, dict);
  std::ofstream o(out);
  if (!o) throw ConfigError("cannot write '" + out + "'");
  csv::write_elements(o, elements, dict);
  std::cout << "wrote " << elements.size() << " elements to " << out << '\n';
  return kOk;
}

int cmd_validate(const std::string& dataset) {
  ItemDictionary dict;
  const auto elements = csv::read_elements_file(dataset, dict);
  Timestamp lo = 0, hi = 0, max_l = 0;
  bool infinite = false;
  for (const auto& e : elements) {
    if (e->infinite())
      infinite = true;
    else
      max_l = std::max(max_l, e->lifespan);
  }
  if (!elements.empty()) {
    lo = elements.front()->arrival;
    hi = elements.back()->arrival;
  }
  std::cout << dataset << ": " << elements.size() << " elements, "
            << dict.size() << " items, t in [" << lo << ", " << hi
            << "], max finite lifespan " << max_l
            << (infinite ? ", has infinite lifespans" : "") << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming submodular maximization over inhomogeneous-decaying streams"};
  app.require_subcommand(1);

  std::string config, algos, out, axis, values, spec, dataset;
  bool events = false;

  auto* run = app.add_subcommand("run", "run one experiment");
  run->add_option("--config", config, "experiment config (JSON)")->required();
  run->add_option("--algos", algos, "comma-separated algorithm list");
  run->add_option("--out", out, "output directory");
  run->add_flag("--events", events, "write <algo>.events.jsonl for histogram algorithms");

  auto* sweep = app.add_subcommand("sweep", "repeat an experiment over one axis");
  sweep->add_option("--config", config, "experiment config (JSON)")->required();
  sweep->add_option("--axis", axis, "p, k or epsilon")->required();
  sweep->add_option("--values", values, "comma-separated values")->required();
  sweep->add_option("--algos", algos, "comma-separated algorithm list");
  sweep->add_option("--out", out, "output directory");

  auto* synth = app.add_subcommand("synth", "write a synthetic element CSV");
  synth->add_option("--spec", spec, "synthetic stream spec (JSON)")->required();
  synth->add_option("--out", out, "output CSV")->required();

  auto* val = app.add_subcommand("validate", "check an element CSV");
  val->add_option("--dataset", dataset, "element CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(config, algos, out, events);
    if (*sweep) return cmd_sweep(config, axis, values, algos, out);
    if (*synth) return cmd_synth(spec, out);
    if (*val) return cmd_validate(dataset);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const GuardError& e) {
    std::cerr << "guard violation: " << e.what() << '\n';
    return kGuard;
  }
  return kOk;
}
