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

#pragma once

#include <string>
#include <vector>

#include "polsim/generate.hpp"
#include "polsim/similarity.hpp"

namespace polsim {

struct BenchConfig {
  std::vector<std::size_t> rule_counts{4};
  std::vector<std::size_t> parameter_counts{12};
  std::size_t pairs = 10;
  std::size_t repetitions = 3;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::size_t attribute_count = 3;
  double permit_ratio = 0.5;
};

struct BenchRecord {
  std::size_t pair_id = 0;
  std::size_t rule_count = 0;
  std::size_t parameter_count = 0;
  double preprocess_ms = 0.0;
  double prove_ms = 0.0;
  double total_ms = 0.0;
  Relation relation = Relation::Shuffle;
};

struct TimedComparison {
  double preprocess_ms = 0.0;
  double prove_ms = 0.0;
  double total_ms = 0.0;
  Relation relation = Relation::Shuffle;
};

// One comparison with the preprocessing / proving split measured at the
// ring-term boundary.
TimedComparison timed_compare(const std::string& xml1, const std::string& xml2);

// Mean times over `repetitions` runs per generated pair; rows sorted by
// (ruleCount, parameterCount, pairId).
std::vector<BenchRecord> run_bench(const BenchConfig& config);

std::string bench_csv(const std::vector<BenchRecord>& records);

}  // namespace polsim
