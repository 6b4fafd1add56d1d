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

#include <cstdint>
#include <string>

#include "polsim/xacml.hpp"

namespace polsim {

struct GenConfig {
  std::size_t rule_count = 4;
  std::size_t attribute_count = 3;
  std::size_t values_per_attribute = 4;
  double permit_ratio = 0.5;
  Combiner combiner = Combiner::FirstApplicable;
  std::uint64_t seed = 1;
};

// Throws Config on out-of-range fields.
void validate_config(const GenConfig& config);

// Deterministic: the same config and stream always produce the same policy.
// `stream` separates independent draws under one seed (e.g. the two sides
// of a pair, or a pair index).
XacmlNode generate_policy(const GenConfig& config, std::uint64_t stream,
                          const std::string& policy_id);

std::string generate_policy_document(const GenConfig& config,
                                     std::uint64_t stream,
                                     const std::string& policy_id);

// A combiner the compare pipeline supports (no overlap subtraction), chosen
// deterministically from the stream.
Combiner comparable_combiner(std::uint64_t seed, std::uint64_t stream);

}  // namespace polsim
