// Copyright 2026 The QGDM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qgdm run --config <path> [--scenario S]... [--policy P]... [--episodes N]
//          [--seed K] [--out DIR] [--format csv|json] [--trace]

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qgdm/harness/batch.hpp"
#include "qgdm/harness/config.hpp"
#include "qgdm/harness/report.hpp"

namespace {

using namespace qgdm;

// Keeps the configured entries named on the command line, in command-line order.
template <class T, class Name>
std::vector<T> select(const std::vector<T>& all, const std::vector<std::string>& names, Name name,
                      const char* what) {
  if (names.empty()) return all;
  std::vector<T> out;
  for (const auto& n : names) {
    bool found = false;
    for (const auto& e : all) {
      if (name(e) == n) {
        out.push_back(e);
        found = true;
      }
    }
    if (!found) throw std::invalid_argument(std::string(what) + " '" + n + "' not in config");
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum game decision-making experiments"};
  app.require_subcommand(1);
  auto* run = app.add_subcommand("run", "Run a batch of episodes and write a report");

  std::string config_path;
  std::vector<std::string> scenarios, policies;
  std::optional<long long> episodes;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
  std::optional<unsigned> threads;
  bool trace = false;
  bool no_latency = false;

  run->add_option("--config", config_path, "JSON experiment config")->required();
  run->add_option("--scenario", scenarios, "Restrict to these scenarios (repeatable)");
  run->add_option("--policy", policies, "Restrict to these policies (repeatable)");
  run->add_option("--episodes", episodes, "Episodes per (scenario, policy)");
  run->add_option("--seed", seed, "Base seed");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--threads", threads, "Worker threads (0 = hardware)");
  run->add_flag("--trace", trace, "Write per-episode JSON-lines decision traces");
  run->add_flag("--no-latency", no_latency, "Report zero latency (byte-stable output)");

  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = harness::load_config(config_path);
    // Parse scenario/policy names first so typos fail with a clear message.
    for (const auto& s : scenarios) {
      if (!sim::parse_scenario_kind(s)) throw std::invalid_argument("unknown scenario '" + s + "'");
    }
    for (const auto& p : policies) {
      if (!policy::parse_policy_kind(p)) throw std::invalid_argument("unknown policy '" + p + "'");
    }
    cfg.scenarios = select(cfg.scenarios, scenarios,
                           [](const harness::ScenarioEntry& e) { return std::string(sim::to_string(e.spec.kind)); },
                           "scenario");
    cfg.policies = select(cfg.policies, policies,
                          [](const policy::PolicyConfig& p) { return std::string(policy::to_string(p.kind)); },
                          "policy");
    if (episodes) {
      if (*episodes < 1) throw std::invalid_argument("--episodes must be >= 1");
      for (auto& s : cfg.scenarios) s.episodes = static_cast<std::size_t>(*episodes);
    }
    if (seed) cfg.seed = *seed;
    if (out_dir) cfg.out_dir = *out_dir;
    if (format) cfg.format = *format == "csv" ? harness::ReportFormat::Csv : harness::ReportFormat::Json;
    if (threads) cfg.threads = *threads;
    if (trace) cfg.trace = true;
    if (no_latency) cfg.measure_latency = false;

    const auto rows = harness::run_batch(cfg);
    const auto path = harness::emit_report(rows, cfg.format, cfg.out_dir);
    std::cout << harness::write_csv(harness::to_records(rows));
    std::cerr << "wrote " << path.string() << "\n";
  } catch (const harness::BatchAborted& e) {
    std::cerr << "qgdm: aborted: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qgdm: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
