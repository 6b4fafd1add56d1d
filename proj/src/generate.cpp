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

#include "polsim/generate.hpp"

#include <random>

namespace polsim {

void validate_config(const GenConfig& config) {
  if (config.rule_count < 1)
    throw Error(ErrorKind::Config, "rule count must be at least 1");
  if (config.attribute_count < 1)
    throw Error(ErrorKind::Config, "attribute count must be at least 1");
  if (config.values_per_attribute < 2)
    throw Error(ErrorKind::Config, "values per attribute must be at least 2");
  if (config.permit_ratio < 0.0 || config.permit_ratio > 1.0)
    throw Error(ErrorKind::Config, "permit ratio must lie in [0, 1]");
}

namespace {

std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream) {
  // splitmix-style mixing keeps streams independent under one seed.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return std::mt19937_64(z ^ (z >> 31));
}

std::size_t draw(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

bool chance(std::mt19937_64& rng, double p) {
  return (rng() >> 11) * 0x1.0p-53 < p;
}

std::string attribute_name(std::size_t i) {
  switch (i) {
    case 0: return "resource-id";
    case 1: return "action-id";
    case 2: return "subject-id";
    default: return "attr-" + std::to_string(i + 1);
  }
}

std::string category_name(std::size_t i) {
  switch (i) {
    case 0: return "resource";
    case 1: return "action";
    case 2: return "access-subject";
    default: return "environment";
  }
}

std::string value_name(std::size_t j) { return "v" + std::to_string(j + 1); }

XacmlNode make_match(std::size_t attribute, std::size_t value) {
  XacmlNode match;
  match.kind = XacmlKind::Match;
  match.match_id = "string-equal";
  match.attribute_id = attribute_name(attribute);
  match.category = category_name(attribute);
  match.data_type = "http://www.w3.org/2001/XMLSchema#string";
  match.value = value_name(value);
  return match;
}

// One AllOf holding every restriction: same-attribute matches widen the
// value set, distinct attributes conjoin.
XacmlNode make_target(std::mt19937_64& rng, const GenConfig& config,
                      double restrict_probability) {
  XacmlNode target;
  target.kind = XacmlKind::Target;
  XacmlNode all_of;
  all_of.kind = XacmlKind::AllOf;
  for (std::size_t attr = 0; attr < config.attribute_count; ++attr) {
    if (!chance(rng, restrict_probability)) continue;
    std::size_t max_values =
        std::min<std::size_t>(config.values_per_attribute, 3);
    std::size_t count = 1 + draw(rng, max_values);
    std::vector<bool> used(config.values_per_attribute, false);
    for (std::size_t k = 0; k < count; ++k) {
      std::size_t v = draw(rng, config.values_per_attribute);
      if (used[v]) continue;
      used[v] = true;
      all_of.children.push_back(make_match(attr, v));
    }
  }
  if (all_of.children.empty()) return target;  // matches everything
  XacmlNode any_of;
  any_of.kind = XacmlKind::AnyOf;
  any_of.children.push_back(std::move(all_of));
  target.children.push_back(std::move(any_of));
  return target;
}

}  // namespace

XacmlNode generate_policy(const GenConfig& config, std::uint64_t stream,
                          const std::string& policy_id) {
  validate_config(config);
  std::mt19937_64 rng = seeded_rng(config.seed, stream);

  XacmlNode policy;
  policy.kind = XacmlKind::Policy;
  policy.id = policy_id;
  policy.version = "1.0";
  policy.combiner = config.combiner;

  XacmlNode target = make_target(rng, config, 0.5);
  policy.children.push_back(std::move(target));

  for (std::size_t r = 0; r < config.rule_count; ++r) {
    XacmlNode rule;
    rule.kind = XacmlKind::Rule;
    rule.id = policy_id + "-rule-" + std::to_string(r + 1);
    rule.effect =
        chance(rng, config.permit_ratio) ? Effect::Permit : Effect::Deny;
    XacmlNode rule_target = make_target(rng, config, 0.75);
    if (!rule_target.children.empty())
      rule.children.push_back(std::move(rule_target));
    policy.children.push_back(std::move(rule));
  }
  return policy;
}

std::string generate_policy_document(const GenConfig& config,
                                     std::uint64_t stream,
                                     const std::string& policy_id) {
  return serialize_xacml(generate_policy(config, stream, policy_id));
}

Combiner comparable_combiner(std::uint64_t seed, std::uint64_t stream) {
  static const Combiner pool[] = {
      Combiner::PermitOverrides, Combiner::DenyOverrides,
      Combiner::FirstApplicable, Combiner::DenyUnlessPermit,
      Combiner::PermitUnlessDeny,
  };
  std::mt19937_64 rng = seeded_rng(seed, stream ^ 0xC0119A7Eull);
  return pool[rng() % (sizeof(pool) / sizeof(pool[0]))];
}

}  // namespace polsim
