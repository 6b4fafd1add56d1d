// Copyright 2026 The polsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "polsim/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

namespace polsim {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

}  // namespace

TimedComparison timed_compare(const std::string& xml1,
                              const std::string& xml2) {
  TimedComparison out;
  auto total_start = Clock::now();

  auto pre_start = Clock::now();
  XacmlNode doc1 = parse_xacml(xml1);
  XacmlNode doc2 = parse_xacml(xml2);
  PreparedComparison prepared = prepare_comparison(doc1, doc2);
  out.preprocess_ms = ms_since(pre_start);

  auto prove_start = Clock::now();
  SimilarityReport report = decide(prepared);
  out.prove_ms = ms_since(prove_start);

  out.total_ms = ms_since(total_start);
  out.relation = report.relation;
  return out;
}

std::vector<BenchRecord> run_bench(const BenchConfig& config) {
  struct Cell {
    std::size_t rule_count;
    std::size_t parameter_count;
    std::size_t pair_id;
  };
  std::vector<Cell> cells;
  for (std::size_t rules : config.rule_counts)
    for (std::size_t params : config.parameter_counts)
      for (std::size_t pair = 0; pair < config.pairs; ++pair)
        cells.push_back({rules, params, pair});

  std::vector<BenchRecord> records(cells.size());

  auto run_cell = [&](std::size_t index) {
    const Cell& cell = cells[index];
    GenConfig gen;
    gen.rule_count = cell.rule_count;
    gen.attribute_count = config.attribute_count;
    gen.values_per_attribute = std::max<std::size_t>(
        2, cell.parameter_count / std::max<std::size_t>(1, config.attribute_count));
    gen.permit_ratio = config.permit_ratio;
    gen.seed = config.seed + 7919 * cell.rule_count + 31 * cell.parameter_count;

    std::uint64_t stream = 2 * cell.pair_id;
    gen.combiner = comparable_combiner(gen.seed, stream);
    std::string xml1 = generate_policy_document(
        gen, stream, "bench-p" + std::to_string(cell.pair_id) + "a");
    gen.combiner = comparable_combiner(gen.seed, stream + 1);
    std::string xml2 = generate_policy_document(
        gen, stream + 1, "bench-p" + std::to_string(cell.pair_id) + "b");

    BenchRecord record;
    record.pair_id = cell.pair_id;
    record.rule_count = cell.rule_count;
    record.parameter_count = cell.parameter_count;
    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
      TimedComparison t = timed_compare(xml1, xml2);
      record.preprocess_ms += t.preprocess_ms;
      record.prove_ms += t.prove_ms;
      record.total_ms += t.total_ms;
      record.relation = t.relation;
    }
    const double reps = static_cast<double>(std::max<std::size_t>(1, config.repetitions));
    record.preprocess_ms /= reps;
    record.prove_ms /= reps;
    record.total_ms /= reps;
    records[index] = record;
  };

  const std::size_t workers = std::max<std::size_t>(1, config.threads);
  if (workers == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= cells.size()) return;
          run_cell(i);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  std::sort(records.begin(), records.end(),
            [](const BenchRecord& a, const BenchRecord& b) {
              return std::tie(a.rule_count, a.parameter_count, a.pair_id) <
                     std::tie(b.rule_count, b.parameter_count, b.pair_id);
            });
  return records;
}

std::string bench_csv(const std::vector<BenchRecord>& records) {
  std::ostringstream out;
  out << "pairId,ruleCount,parameterCount,preprocessMillis,proveMillis,"
         "totalMillis,relation\n";
  for (const BenchRecord& r : records) {
    out << r.pair_id << ',' << r.rule_count << ',' << r.parameter_count << ','
        << r.preprocess_ms << ',' << r.prove_ms << ',' << r.total_ms << ','
        << relation_name(r.relation) << '\n';
  }
  return out.str();
}

}  // namespace polsim
