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

#pragma once

// Batch runner: every (scenario, policy) pair over seeds base+0..n-1.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "qgdm/harness/config.hpp"
#include "qgdm/sim/episode.hpp"

namespace qgdm::harness {

struct ReportRow {
  std::string scenario;
  std::string method;
  sim::AggregateMetrics metrics;
};

/// A hard error inside an episode; carries the seed that reproduces it.
class BatchAborted : public std::runtime_error {
 public:
  BatchAborted(std::string scenario, std::string method, std::uint64_t seed,
               const std::string& what)
      : std::runtime_error("episode failed (scenario " + scenario + ", policy " + method +
                           ", seed " + std::to_string(seed) + "): " + what),
        scenario_(std::move(scenario)),
        method_(std::move(method)),
        seed_(seed) {}
  const std::string& scenario() const { return scenario_; }
  const std::string& method() const { return method_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::string scenario_;
  std::string method_;
  std::uint64_t seed_;
};

inline nlohmann::json trace_line(const sim::DecisionRecord& r) {
  nlohmann::json j;
  j["t"] = r.time;
  j["action"] = sim::to_string(r.action);
  j["step"] = policy::to_string(r.step);
  j["players"] = r.players;
  j["action_sets"] = r.action_sets;
  j["payoffs"] = r.payoffs;
  j["distribution"] = r.distribution;
  j["expected_utility"] = r.expected_utility;
  j["ego"] = {{"x", r.ego.x},         {"y", r.ego.y},         {"heading", r.ego.heading},
              {"s", r.ego.s},         {"speed", r.ego.speed}, {"accel", r.ego.accel},
              {"lane", r.ego.lane}};
  return j;
}

/// One JSON object per decision, newline-terminated.
inline std::string trace_jsonl(const sim::EpisodeResult& r) {
  std::string out;
  for (const auto& rec : r.trace) {
    out += trace_line(rec).dump();
    out += '\n';
  }
  return out;
}

inline std::filesystem::path trace_path(const std::string& out_dir, const std::string& scenario,
                                        const std::string& method, std::uint64_t seed) {
  return std::filesystem::path(out_dir) / "traces" /
         (scenario + "__" + method + "__" + std::to_string(seed) + ".jsonl");
}

namespace detail {

struct Job {
  std::size_t pair;
  std::uint64_t seed;
};

}  // namespace detail

inline std::vector<ReportRow> run_batch(const ExperimentConfig& cfg) {
  struct Pair {
    std::string scenario, method;
    const sim::ScenarioSpec* spec;
    const policy::PolicyConfig* policy;
    std::size_t episodes;
    std::size_t first_job;
  };
  std::vector<Pair> pairs;
  for (const auto& s : cfg.scenarios) {
    for (const auto& p : cfg.policies) {
      pairs.push_back({std::string(sim::to_string(s.spec.kind)), std::string(policy::to_string(p.kind)),
                       &s.spec, &p, s.episodes, 0});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return std::tie(a.scenario, a.method) < std::tie(b.scenario, b.method);
  });

  std::vector<detail::Job> jobs;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    pairs[k].first_job = jobs.size();
    for (std::size_t i = 0; i < pairs[k].episodes; ++i) jobs.push_back({k, cfg.seed + i});
  }
  if (cfg.trace) std::filesystem::create_directories(std::filesystem::path(cfg.out_dir) / "traces");

  // One slot per episode; merged in job order afterwards, so the result does
  // not depend on scheduling.
  std::vector<sim::AggregateMetrics> slots(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::mutex error_mu;
  std::optional<std::size_t> failed_job;
  std::string failure;

  auto worker = [&] {
    for (;;) {
      if (abort.load()) return;
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      const Pair& pair = pairs[jobs[j].pair];
      try {
        sim::EpisodeOptions opt;
        opt.record_trace = cfg.trace;
        opt.measure_latency = cfg.measure_latency;
        const auto res = sim::run_episode(*pair.policy, *pair.spec, jobs[j].seed, opt);
        if (cfg.trace) {
          const auto path = trace_path(cfg.out_dir, pair.scenario, pair.method, jobs[j].seed);
          std::ofstream out(path, std::ios::binary);
          out << trace_jsonl(res);
          if (!out) throw std::runtime_error("cannot write trace " + path.string());
        }
        slots[j].add(res);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mu);
        if (!failed_job || j < *failed_job) {
          failed_job = j;
          failure = e.what();
        }
        abort.store(true);
      }
    }
  };

  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::size_t>(effective_threads(cfg), std::max<std::size_t>(1, jobs.size())));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed_job) {
    const Pair& pair = pairs[jobs[*failed_job].pair];
    throw BatchAborted(pair.scenario, pair.method, jobs[*failed_job].seed, failure);
  }

  std::vector<ReportRow> rows;
  for (const auto& pair : pairs) {
    ReportRow row{pair.scenario, pair.method, {}};
    for (std::size_t i = 0; i < pair.episodes; ++i) row.metrics.merge(slots[pair.first_job + i]);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qgdm::harness
